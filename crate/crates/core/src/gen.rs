//! Seeded random instances.
//!
//! Coefficients are uniform over the nonzero reduced fractions `b/a` with
//! `0 < a <= H` and `|b/a| <= C`. Exponent vectors are uniform over the
//! monomials of total degree `<= D`, drawn without repetition.

use std::collections::HashSet;

use num_integer::Integer;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{MultiPoly, MultiTerm, Rational, SparsePoly, Term};
use crate::error::{invalid, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform nonzero element of the bounded-rational set.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, magnitude: u64, denominator: u64) -> Rational {
    assert!(magnitude >= 1 && denominator >= 1, "bounds must be positive");
    let top = (magnitude as i128) * denominator as i128;
    // each reduced b/a has exactly one pair in the box, so rejection is uniform
    loop {
        let a = rng.gen_range(1..=denominator as i128);
        let b = rng.gen_range(-top..=top);
        if b != 0 && b.abs() <= magnitude as i128 * a && b.unsigned_abs().gcd(&(a as u128)) == 1 {
            return Rational::new(b, a);
        }
    }
}

/// `terms` distinct degrees in `0..=degree`, each with a random coefficient.
pub fn random_sparse_poly<R: Rng + ?Sized>(
    rng: &mut R,
    degree: u64,
    terms: usize,
    magnitude: u64,
    denominator: u64,
) -> Result<SparsePoly> {
    let slots = usize::try_from(degree).ok().and_then(|d| d.checked_add(1)).ok_or_else(|| invalid("degree too large"))?;
    if terms > slots {
        return Err(invalid(format!("{terms} distinct degrees do not fit in 0..={degree}")));
    }
    let degrees = index::sample(rng, slots, terms).into_vec();
    Ok(SparsePoly::from_terms(
        degrees.into_iter().map(|d| Term::new(random_rational(rng, magnitude, denominator), d as u64)),
    ))
}

/// Number of monomials in `nvars` variables of total degree `<= degree`,
/// saturating at `usize::MAX`.
pub fn monomial_count(nvars: usize, degree: u64) -> usize {
    // C(D + n, n), built incrementally so every step stays integral
    let mut acc: u128 = 1;
    for i in 1..=nvars as u128 {
        acc = acc * (degree as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Uniform exponent vector with total degree `<= degree` (stars and bars).
pub fn random_exponents<R: Rng + ?Sized>(rng: &mut R, nvars: usize, degree: u64) -> Vec<u64> {
    let mut bars = index::sample(rng, degree as usize + nvars, nvars).into_vec();
    bars.sort_unstable();
    let mut prev: i64 = -1;
    bars.into_iter()
        .map(|s| {
            let e = (s as i64 - prev - 1) as u64;
            prev = s as i64;
            e
        })
        .collect()
}

/// `terms` distinct monomials with random coefficients.
pub fn random_multi_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    degree: u64,
    terms: usize,
    magnitude: u64,
    denominator: u64,
) -> Result<MultiPoly> {
    if nvars == 0 {
        return Err(invalid("need at least one variable"));
    }
    if terms > monomial_count(nvars, degree) {
        return Err(invalid(format!("{terms} distinct monomials do not exist for n={nvars}, D={degree}")));
    }
    let mut seen = HashSet::with_capacity(terms);
    let mut out = Vec::with_capacity(terms);
    while out.len() < terms {
        let e = random_exponents(rng, nvars, degree);
        if seen.insert(e.clone()) {
            out.push(MultiTerm::new(random_rational(rng, magnitude, denominator), e));
        }
    }
    MultiPoly::new(nvars, out)
}

/// Random point with small nonzero rational coordinates.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> Vec<Rational> {
    (0..nvars).map(|_| random_rational(rng, 1000, 97)).collect()
}
