//! Modified Kronecker substitution and the prime bounds that drive it.
//!
//! `x_i -> x^k_i` with `k_i = (D+1)^(i-1) mod p` keeps the image degree at
//! most `D(p-1)`. A prime is good for `f` when no two monomials of `f` land on
//! the same image degree.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};
use rand::Rng;

use crate::domain::{BlackBox, MultiPoly, Rational, SparsePoly, Term};
use crate::error::{invalid, Error, Result};
use crate::primes::{first_primes, is_prime, primes_between};

pub use crate::primes::first_odd_primes;

/// `[(D+1)^(i-1) mod p]` for `i = 1..=n`, by a modular chain.
pub fn kron_exponents(degree_bound: u64, p: u64, nvars: usize) -> Vec<u64> {
    let base = ((degree_bound as u128 + 1) % p as u128) as u64;
    let mut out = Vec::with_capacity(nvars);
    let mut k = 1 % p;
    for _ in 0..nvars {
        out.push(k);
        k = ((k as u128 * base as u128) % p as u128) as u64;
    }
    out
}

fn mapped_degree(exponents: &[u64], ks: &[u64]) -> u64 {
    exponents.iter().zip(ks).map(|(&e, &k)| e * k).sum()
}

/// The substitution `x_i -> x^k_i` for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerMap {
    nvars: usize,
    degree_bound: u64,
    prime: u64,
    exponents: Vec<u64>,
}

impl KroneckerMap {
    pub fn new(nvars: usize, degree_bound: u64, prime: u64) -> Result<Self> {
        if nvars == 0 || degree_bound == 0 {
            return Err(invalid("substitution needs n >= 1 and D >= 1"));
        }
        if !is_prime(prime) {
            return Err(invalid(format!("{prime} is not prime")));
        }
        let exponents = kron_exponents(degree_bound, prime, nvars);
        Ok(KroneckerMap { nvars, degree_bound, prime, exponents })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `D(p-1)`, the largest possible image degree.
    pub fn image_degree_bound(&self) -> u64 {
        self.degree_bound * (self.prime - 1)
    }

    pub fn image_degree(&self, exponents: &[u64]) -> u64 {
        mapped_degree(exponents, &self.exponents)
    }

    /// `(x^k_1, ..., x^k_n)`
    pub fn point(&self, x: &Rational) -> Vec<Rational> {
        self.exponents.iter().map(|&k| x.pow(k)).collect()
    }

    /// The image `f(x, x^k_2, ..., x^k_n)` built symbolically.
    pub fn substitute(&self, f: &MultiPoly) -> Result<SparsePoly> {
        check_arity(f.nvars(), self.nvars)?;
        Ok(SparsePoly::from_terms(
            f.terms().iter().map(|t| Term::new(t.coeff.clone(), self.image_degree(&t.exponents))),
        ))
    }
}

fn check_arity(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(invalid(format!("black box has arity {got}, substitution expects {want}")));
    }
    Ok(())
}

/// The substitution `x_i -> q_i x^k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiversifiedMap {
    base: KroneckerMap,
    qs: Vec<u64>,
}

impl DiversifiedMap {
    /// `qs` defaults to the first `n` primes; an override must be `n`
    /// strictly increasing primes.
    pub fn new(base: KroneckerMap, qs: Option<Vec<u64>>) -> Result<Self> {
        let qs = match qs {
            Some(qs) => {
                if qs.len() != base.nvars {
                    return Err(invalid(format!("need {} diversification primes, got {}", base.nvars, qs.len())));
                }
                if let Some(q) = qs.iter().find(|&&q| !is_prime(q)) {
                    return Err(invalid(format!("diversification weight {q} is not prime")));
                }
                if qs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("diversification primes must be strictly increasing"));
                }
                qs
            }
            None => first_primes(base.nvars),
        };
        Ok(DiversifiedMap { base, qs })
    }

    pub fn base(&self) -> &KroneckerMap {
        &self.base
    }

    pub fn qs(&self) -> &[u64] {
        &self.qs
    }

    /// `q_n`, the largest weight.
    pub fn max_q(&self) -> u64 {
        *self.qs.last().expect("at least one variable")
    }

    pub fn point(&self, x: &Rational) -> Vec<Rational> {
        self.base
            .exponents
            .iter()
            .zip(&self.qs)
            .map(|(&k, &q)| x.pow(k).mul_int(&BigInt::from(q)))
            .collect()
    }

    /// The image `f(q_1 x, q_2 x^k_2, ...)` built symbolically.
    pub fn substitute(&self, f: &MultiPoly) -> Result<SparsePoly> {
        check_arity(f.nvars(), self.base.nvars)?;
        Ok(SparsePoly::from_terms(f.terms().iter().map(|t| {
            let weight = t
                .exponents
                .iter()
                .zip(&self.qs)
                .fold(BigInt::one(), |acc, (&e, &q)| acc * Pow::pow(BigInt::from(q), e));
            Term::new(t.coeff.mul_int(&weight), self.base.image_degree(&t.exponents))
        })))
    }
}

/// Univariate view `x -> mbb(x^k_1, ..., x^k_n)`.
pub struct SubstitutedBox<'a, B: ?Sized> {
    inner: &'a B,
    map: KroneckerMap,
    probes: AtomicU64,
}

impl<B: BlackBox + ?Sized> BlackBox for SubstitutedBox<'_, B> {
    fn arity(&self) -> usize {
        1
    }

    fn probe(&self, point: &[Rational]) -> Result<Rational> {
        let [x] = point else {
            return Err(invalid(format!("substituted box takes 1 coordinate, got {}", point.len())));
        };
        let v = self.inner.probe(&self.map.point(x))?;
        self.probes.fetch_add(1, Ordering::Relaxed);
        Ok(v)
    }

    fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }
}

pub fn substituted_blackbox<'a, B: BlackBox + ?Sized>(mbb: &'a B, map: &KroneckerMap) -> Result<SubstitutedBox<'a, B>> {
    check_arity(mbb.arity(), map.nvars)?;
    Ok(SubstitutedBox { inner: mbb, map: map.clone(), probes: AtomicU64::new(0) })
}

/// Univariate view `x -> mbb(q_1 x^k_1, ..., q_n x^k_n)`.
pub struct DiversifiedBox<'a, B: ?Sized> {
    inner: &'a B,
    map: DiversifiedMap,
    probes: AtomicU64,
}

impl<B: BlackBox + ?Sized> BlackBox for DiversifiedBox<'_, B> {
    fn arity(&self) -> usize {
        1
    }

    fn probe(&self, point: &[Rational]) -> Result<Rational> {
        let [x] = point else {
            return Err(invalid(format!("diversified box takes 1 coordinate, got {}", point.len())));
        };
        let v = self.inner.probe(&self.map.point(x))?;
        self.probes.fetch_add(1, Ordering::Relaxed);
        Ok(v)
    }

    fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }
}

pub fn diversified_blackbox<'a, B: BlackBox + ?Sized>(
    mbb: &'a B,
    dmap: &DiversifiedMap,
) -> Result<DiversifiedBox<'a, B>> {
    check_arity(mbb.arity(), dmap.base.nvars)?;
    Ok(DiversifiedBox { inner: mbb, map: dmap.clone(), probes: AtomicU64::new(0) })
}

/// `⌊T(T-1)/2 · log2((D+1)^n - 1) - T²/4 + T/2⌋ + 1`, exactly.
pub fn good_prime_count_bound(nvars: usize, degree_bound: u64, terms: usize) -> u64 {
    let t = terms as i128;
    let pairs = (terms as u64) * (terms as u64).saturating_sub(1) / 2;
    let x: BigInt = Pow::pow(BigInt::from(degree_bound + 1), nvars as u64) - 1u32;
    // ⌊4K log2 X⌋ = bits(X^(4K)) - 1 for X >= 1
    let scaled_log = if pairs == 0 { 0 } else { Pow::pow(&x, 4 * pairs).bits() as i128 - 1 };
    let numerator = scaled_log - t * t + 2 * t;
    (numerator.div_euclid(4) + 1).max(1) as u64
}

/// Bracket of `atanh(z)` for `0 <= z < 1` from the first `k` series terms.
fn atanh_bracket(z: &Rational, k: u32) -> (Rational, Rational) {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = Rational::zero();
    for i in 0..k {
        sum = &sum + &(&power / &Rational::from(2 * i + 1));
        power = &power * &z2;
    }
    // tail <= z^(2k+1) / ((2k+1)(1 - z²))
    let tail = &power / &(Rational::from(2 * k + 1) * (Rational::one() - z2));
    let hi = &sum + &tail;
    (sum, hi)
}

/// Rational bracket `lo <= ln x <= hi` for `x >= 1`.
pub fn ln_bracket(x: u64, k: u32) -> (Rational, Rational) {
    assert!(x >= 1, "ln bracket needs x >= 1");
    let e = 63 - x.leading_zeros() as u64;
    let pow2 = 1u128 << e;
    // ln x = 2e atanh(1/3) + 2 atanh((x - 2^e)/(x + 2^e))
    let z = Rational::new(BigInt::from(x as u128 - pow2), BigInt::from(x as u128 + pow2));
    let (l2_lo, l2_hi) = atanh_bracket(&Rational::new(1, 3), k);
    let (r_lo, r_hi) = atanh_bracket(&z, k);
    let two_e = Rational::from(2 * e);
    let lo = &two_e * &l2_lo + Rational::from(2) * r_lo;
    let hi = &two_e * &l2_hi + Rational::from(2) * r_hi;
    (lo, hi)
}

const LAMBDA_FLOOR: i64 = 21;

/// `max(21, (5/3) n T(T-1) ln D)`, as an upper rational bound tight enough
/// that `⌈λ⌉` and `⌊2λ⌋` match the exact value.
pub fn lambda_bound(nvars: usize, terms: usize, degree_bound: u64) -> Result<Rational> {
    if degree_bound < 2 {
        return Err(invalid(format!("lambda bound needs D >= 2, got {degree_bound}")));
    }
    if nvars == 0 || terms == 0 {
        return Err(invalid("lambda bound needs n >= 1 and T >= 1"));
    }
    let floor = Rational::from(LAMBDA_FLOOR);
    let t = terms as u64;
    let m = Rational::new(BigInt::from(5 * nvars as u64) * t * (t - 1), 3);
    if m.is_zero() {
        return Ok(floor);
    }
    let mut k = 8;
    loop {
        let (lo, hi) = ln_bracket(degree_bound, k);
        let (lo, hi) = (&m * &lo, &m * &hi);
        if hi <= floor {
            return Ok(floor);
        }
        let two = Rational::from(2);
        let settled = lo > floor && lo.ceil() == hi.ceil() && (&two * &lo).floor() == (&two * &hi).floor();
        if settled || k >= 1024 {
            return Ok(hi.max(floor));
        }
        k *= 2;
    }
}

fn to_u64(x: &BigInt) -> Result<u64> {
    u64::try_from(x).map_err(|_| invalid(format!("{x} does not fit the prime range")))
}

/// Uniform choice among the primes in `[⌈lo⌉, ⌊hi⌋]`.
pub fn random_prime_in<R: Rng + ?Sized>(lo: &Rational, hi: &Rational, rng: &mut R) -> Result<u64> {
    let lo = lo.ceil().max(BigInt::from(0));
    let hi = hi.floor();
    if hi.is_negative() {
        return Err(Error::Internal(format!("no prime in [{lo}, {hi}]")));
    }
    let (lo, hi) = (to_u64(&lo)?, to_u64(&hi)?);
    let candidates = primes_between(lo, hi);
    if candidates.is_empty() {
        return Err(Error::Internal(format!("no prime in [{lo}, {hi}]")));
    }
    Ok(candidates[rng.gen_range(0..candidates.len())])
}

/// Whether `p` keeps the mapped degrees of `vectors` pairwise distinct.
pub fn is_good_prime(vectors: &[Vec<u64>], degree_bound: u64, p: u64) -> bool {
    let Some(first) = vectors.first() else {
        return true;
    };
    let ks = kron_exponents(degree_bound, p, first.len());
    let mut seen = HashSet::with_capacity(vectors.len());
    vectors.iter().all(|v| seen.insert(mapped_degree(v, &ks)))
}

/// Smallest prime in `primes` that is good for `f`, if any.
pub fn first_good_prime(f: &MultiPoly, degree_bound: u64, primes: &[u64]) -> Option<u64> {
    let vectors = f.exponent_vectors();
    primes.iter().copied().find(|&p| is_good_prime(&vectors, degree_bound, p))
}

/// `⌈λ⌉` and `⌊2λ⌋` as integers.
pub fn lambda_range(lambda: &Rational) -> (BigInt, BigInt) {
    (lambda.ceil(), (Rational::from(2) * lambda).floor())
}
