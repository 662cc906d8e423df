//! Sparse interpolation of black-box polynomials whose coefficients come from
//! a known finite set, in particular bounded rationals `b/a` with `|b/a| <= C`
//! and `0 < a <= H`.
//!
//! Univariate polynomials are decoded from one exact evaluation at a large
//! integer. Multivariate polynomials are reduced to univariate images by the
//! substitution `x_i -> x^((D+1)^(i-1) mod p)`, and the exponent vectors are
//! read back from a second probe in which each variable carries a distinct
//! prime weight.

pub mod bench;
pub mod domain;
mod error;
pub mod gen;
pub mod kronecker;
pub mod multivariate;
mod outcome;
pub mod primes;
pub mod univariate;

pub use domain::{BlackBox, CoefficientDomain, MultiPoly, MultiTerm, PolyBox, Rational, SparsePoly, Term};
pub use error::{Error, Result};
pub use outcome::{Failure, Outcome};
