//! Scalars, coefficient sets, sparse polynomials and the black-box contract.

mod blackbox;
mod coeff;
mod poly;
mod rational;
pub mod text;

pub use blackbox::{BlackBox, Evaluate, FnBox, PolyBox};
pub use coeff::{beta_min, make_rational_domain, CoefficientDomain, FiniteSet, UnivariateProbe};
pub use poly::{eval_sparse, grlex, MultiPoly, MultiTerm, PolyRef, SparsePoly, Term};
pub use rational::{gcd, Rational};
