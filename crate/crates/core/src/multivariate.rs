//! Multivariate drivers.
//!
//! Each prime `p` yields a univariate image `f(x, x^k_2, ..., x^k_n)` that is
//! decoded from one probe. A good prime keeps every monomial apart, so its
//! image has the full term count. A second probe through
//! `x_i -> q_i x^k_i` scales each coefficient by `q_1^e_1 ... q_n^e_n`, and
//! factoring that scale over the `q_i` gives back the exponent vector.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{BlackBox, CoefficientDomain, MultiPoly, MultiTerm, Rational, SparsePoly};
use crate::error::{invalid, Error, Result};
use crate::kronecker::{
    diversified_blackbox, first_odd_primes, good_prime_count_bound, lambda_bound, random_prime_in,
    substituted_blackbox, DiversifiedMap, KroneckerMap,
};
use crate::outcome::{Failure, Outcome};
use crate::univariate::{interpolate_image, PeelLimits};

static WINDOW_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of times a rounding value landed outside the open half-unit window,
/// process-wide. Stays zero whenever the probe bound holds.
pub fn window_violations() -> u64 {
    WINDOW_VIOLATIONS.load(Ordering::Relaxed)
}

/// Known bounds on the hidden polynomial: `n` variables, total degree `<= D`,
/// at most `T` terms, coefficients `b/a` with `|b/a| <= C` and `0 < a <= H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub nvars: usize,
    pub degree: u64,
    pub terms: usize,
    pub magnitude: u64,
    pub denominator: u64,
}

impl Bounds {
    pub fn new(nvars: usize, degree: u64, terms: usize, magnitude: u64, denominator: u64) -> Result<Self> {
        if nvars == 0 || degree == 0 || terms == 0 || magnitude == 0 || denominator == 0 {
            return Err(invalid(format!(
                "bounds must be positive (n={nvars}, D={degree}, T={terms}, C={magnitude}, H={denominator})"
            )));
        }
        Ok(Bounds { nvars, degree, terms, magnitude, denominator })
    }

    pub fn domain(&self) -> CoefficientDomain {
        CoefficientDomain::new(self.magnitude, self.denominator).expect("validated bounds")
    }

    /// Checks that `f` satisfies every bound.
    pub fn check(&self, f: &MultiPoly) -> Result<()> {
        if f.nvars() != self.nvars {
            return Err(invalid(format!("polynomial has {} variables, bounds say {}", f.nvars(), self.nvars)));
        }
        if f.len() > self.terms {
            return Err(invalid(format!("polynomial has {} terms, T = {}", f.len(), self.terms)));
        }
        if f.total_degree() > self.degree {
            return Err(invalid(format!("polynomial has degree {}, D = {}", f.total_degree(), self.degree)));
        }
        let domain = self.domain();
        if let Some(t) = f.terms().iter().find(|t| !domain.contains(&t.coeff)) {
            return Err(invalid(format!(
                "coefficient {} is outside |c| <= {}, denominator <= {}",
                t.coeff, self.magnitude, self.denominator
            )));
        }
        Ok(())
    }
}

/// Probe counts and the prime a run settled on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Primes whose image was interpolated.
    pub primes_tried: usize,
    /// Images that decoded without failure.
    pub candidates: usize,
    pub chosen_prime: Option<u64>,
    pub image_probes: u64,
    pub verification_probes: u64,
    pub diversified_probes: u64,
}

impl Stats {
    pub fn total_probes(&self) -> u64 {
        self.image_probes + self.verification_probes + self.diversified_probes
    }
}

/// A deterministic recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    pub poly: MultiPoly,
    pub stats: Stats,
}

/// A probabilistic attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub outcome: Outcome<MultiPoly>,
    pub stats: Stats,
}

/// Univariate image for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateImage {
    pub prime: u64,
    pub poly: Outcome<SparsePoly>,
}

/// Image data needed to read exponent vectors off the diversified probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryContext {
    degrees: Vec<u64>,
    numerators: Vec<BigInt>,
    denominators: Vec<BigInt>,
    qs: Vec<u64>,
    degree_bound: u64,
    beta: BigInt,
}

impl RecoveryContext {
    /// Probe `2 C q_n^D max(H_i) + 1` for the image `image`.
    pub fn new(image: &SparsePoly, qs: &[u64], degree_bound: u64, magnitude: u64) -> Result<Self> {
        let q_max = *qs.last().ok_or_else(|| invalid("need at least one diversification prime"))?;
        let degrees: Vec<u64> = image.terms().iter().map(|t| t.degree).collect();
        let numerators: Vec<BigInt> = image.terms().iter().map(|t| t.coeff.numer().clone()).collect();
        let denominators: Vec<BigInt> = image.terms().iter().map(|t| t.coeff.denom().clone()).collect();
        let h_max = denominators.iter().max().cloned().unwrap_or_else(BigInt::one);
        let beta = 2 * BigInt::from(magnitude) * Pow::pow(BigInt::from(q_max), degree_bound) * h_max + 1;
        Ok(RecoveryContext { degrees, numerators, denominators, qs: qs.to_vec(), degree_bound, beta })
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// Exponents of `value` over `qs`, or the reason it does not factor.
fn factor_over(mut value: BigInt, qs: &[u64], degree_bound: u64) -> std::result::Result<Vec<u64>, Failure> {
    if !value.is_positive() {
        return Err(Failure::Cofactor);
    }
    let mut exps = Vec::with_capacity(qs.len());
    let mut total = 0u64;
    for &q in qs {
        let q = BigInt::from(q);
        let mut e = 0u64;
        loop {
            let (quot, rem) = value.div_rem(&q);
            if !rem.is_zero() {
                break;
            }
            value = quot;
            e += 1;
            total += 1;
            if total > degree_bound {
                return Err(Failure::ExponentSumAboveBound);
            }
        }
        exps.push(e);
    }
    if !value.is_one() {
        return Err(Failure::Cofactor);
    }
    Ok(exps)
}

/// Reads the terms of `f` off `g_value = g(β)`, highest image degree first.
pub fn recover_terms(g_value: &Rational, ctx: &RecoveryContext) -> Outcome<Vec<MultiTerm>> {
    let mut u = g_value.clone();
    let mut terms: Vec<MultiTerm> = Vec::with_capacity(ctx.len());
    for i in (0..ctx.len()).rev() {
        let (c, h) = (&ctx.numerators[i], &ctx.denominators[i]);
        let power = Pow::pow(&ctx.beta, ctx.degrees[i]);
        // v = u H_i / β^d_i = num / m; b = ⌈v - 1/2⌉
        let num = u.numer() * h;
        let m = u.denom() * &power;
        let shifted: BigInt = &m - 2 * &num;
        let b = -shifted.div_floor(&(2 * &m));
        if 2 * &num - 2 * &b * &m == m {
            WINDOW_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
            return Outcome::Failure(Failure::WindowBoundary);
        }
        let (weight, rem) = b.div_rem(c);
        if !rem.is_zero() {
            return Outcome::Failure(Failure::NotDivisible);
        }
        let exps = match factor_over(weight, &ctx.qs, ctx.degree_bound) {
            Ok(e) => e,
            Err(f) => return Outcome::Failure(f),
        };
        if terms.iter().any(|t| t.exponents == exps) {
            return Outcome::Failure(Failure::RepeatedMonomial);
        }
        u = &u - &Rational::new(b, h.clone()).mul_int(&power);
        terms.push(MultiTerm::new(Rational::new(c.clone(), h.clone()), exps));
    }
    if !u.is_zero() {
        return Outcome::Failure(Failure::NonzeroResidue);
    }
    Outcome::Success(terms)
}

fn check_box(mbb: &(impl BlackBox + ?Sized), bounds: &Bounds) -> Result<()> {
    if mbb.arity() != bounds.nvars {
        return Err(invalid(format!("black box has arity {}, bounds say n = {}", mbb.arity(), bounds.nvars)));
    }
    Ok(())
}

fn image_limits(bounds: &Bounds, map: &KroneckerMap) -> PeelLimits {
    PeelLimits { max_terms: Some(bounds.terms), max_degree: Some(map.image_degree_bound()), failure_values: true }
}

/// Steps 5 and 6: diversified probe and exponent recovery for a chosen image.
fn diversify(
    mbb: &(impl BlackBox + ?Sized),
    bounds: &Bounds,
    map: KroneckerMap,
    image: &SparsePoly,
    qs: Option<&[u64]>,
    stats: &mut Stats,
) -> Result<Outcome<MultiPoly>> {
    let dmap = DiversifiedMap::new(map, qs.map(<[u64]>::to_vec))?;
    let ctx = RecoveryContext::new(image, dmap.qs(), bounds.degree, bounds.magnitude)?;
    let dbox = diversified_blackbox(mbb, &dmap)?;
    let g = dbox.probe_at(&Rational::from(ctx.beta().clone()))?;
    stats.diversified_probes += dbox.probes();
    match recover_terms(&g, &ctx) {
        Outcome::Success(terms) => Ok(Outcome::Success(MultiPoly::new(bounds.nvars, terms)?)),
        Outcome::Failure(f) => Ok(Outcome::Failure(f)),
    }
}

fn candidate_order(images: &[CandidateImage]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..images.len()).filter(|&i| images[i].poly.is_success()).collect();
    let len = |i: usize| match &images[i].poly {
        Outcome::Success(p) => p.len(),
        Outcome::Failure(_) => 0,
    };
    // most terms first; primes are already ascending, and the sort is stable
    order.sort_by_key(|&i| std::cmp::Reverse(len(i)));
    order
}

/// Interpolates the image of every prime in `primes` over `domain`.
fn interpolate_images(
    mbb: &(impl BlackBox + ?Sized),
    bounds: &Bounds,
    domain: &CoefficientDomain,
    primes: &[u64],
    stats: &mut Stats,
) -> Result<Vec<CandidateImage>> {
    let mut images = Vec::with_capacity(primes.len());
    for &p in primes {
        let map = KroneckerMap::new(bounds.nvars, bounds.degree, p)?;
        let sub = substituted_blackbox(mbb, &map)?;
        let poly = interpolate_image(&sub, domain, &image_limits(bounds, &map))?;
        stats.image_probes += sub.probes();
        images.push(CandidateImage { prime: p, poly });
    }
    stats.primes_tried = images.len();
    stats.candidates = images.iter().filter(|c| c.poly.is_success()).count();
    Ok(images)
}

/// Compares `candidate` with the substituted box at `1, ..., D(p-1)+1`,
/// stopping at the first mismatch.
fn verify(
    mbb: &(impl BlackBox + ?Sized),
    map: &KroneckerMap,
    candidate: &SparsePoly,
    stats: &mut Stats,
) -> Result<bool> {
    let sub = substituted_blackbox(mbb, map)?;
    let mut ok = true;
    for j in 1..=map.image_degree_bound() + 1 {
        let x = Rational::from(j);
        if sub.probe_at(&x)? != candidate.eval(&x) {
            ok = false;
            break;
        }
    }
    stats.verification_probes += sub.probes();
    Ok(ok)
}

fn expect_success(outcome: Outcome<MultiPoly>, prime: u64) -> Result<MultiPoly> {
    match outcome {
        Outcome::Success(p) => Ok(p),
        Outcome::Failure(f) => Err(Error::Internal(format!("exponent recovery failed for verified prime {prime}: {f}"))),
    }
}

/// Deterministic recovery: images for the first `N` odd primes, the fullest
/// verified image, then the diversified probe.
///
/// `qs` overrides the diversification primes (default: the first `n` primes).
pub fn mpoly_si_mk(mbb: &(impl BlackBox + ?Sized), bounds: &Bounds, qs: Option<&[u64]>) -> Result<Recovered> {
    check_box(mbb, bounds)?;
    let mut stats = Stats::default();
    let count = good_prime_count_bound(bounds.nvars, bounds.degree, bounds.terms);
    let primes = first_odd_primes(count as usize);
    let images = interpolate_images(mbb, bounds, &bounds.domain(), &primes, &mut stats)?;
    for i in candidate_order(&images) {
        let Outcome::Success(image) = &images[i].poly else { unreachable!("filtered to successes") };
        let map = KroneckerMap::new(bounds.nvars, bounds.degree, images[i].prime)?;
        if !verify(mbb, &map, image, &mut stats)? {
            continue;
        }
        stats.chosen_prime = Some(images[i].prime);
        let outcome = diversify(mbb, bounds, map, image, qs, &mut stats)?;
        let poly = expect_success(outcome, images[i].prime)?;
        return Ok(Recovered { poly, stats });
    }
    Err(Error::Internal(format!(
        "none of the first {count} odd primes produced a verified image; the bounds do not hold for this box"
    )))
}

/// Integer-coefficient recovery: images over `|a| <= TC` always decode, so
/// the fullest image is taken without verification. `bounds.denominator`
/// must be 1.
pub fn mpoly_si_mk_int(mbb: &(impl BlackBox + ?Sized), bounds: &Bounds, qs: Option<&[u64]>) -> Result<Recovered> {
    check_box(mbb, bounds)?;
    if bounds.denominator != 1 {
        return Err(invalid(format!("integer path needs H = 1, got {}", bounds.denominator)));
    }
    let mut stats = Stats::default();
    let enlarged = (bounds.terms as u64)
        .checked_mul(bounds.magnitude)
        .ok_or_else(|| invalid("T * C overflows u64"))?;
    let domain = CoefficientDomain::new(enlarged, 1)?;
    let count = good_prime_count_bound(bounds.nvars, bounds.degree, bounds.terms);
    let primes = first_odd_primes(count as usize);
    let images = interpolate_images(mbb, bounds, &domain, &primes, &mut stats)?;
    let Some(&i) = candidate_order(&images).first() else {
        return Err(Error::Internal("no image decoded over the enlarged integer set".into()));
    };
    let Outcome::Success(image) = &images[i].poly else { unreachable!("filtered to successes") };
    let map = KroneckerMap::new(bounds.nvars, bounds.degree, images[i].prime)?;
    stats.chosen_prime = Some(images[i].prime);
    let outcome = diversify(mbb, bounds, map, image, qs, &mut stats)?;
    let poly = expect_success(outcome, images[i].prime)?;
    Ok(Recovered { poly, stats })
}

/// The threshold `λ`; `D < 2` makes `ln D` vanish, so the floor 21 applies.
pub fn lambda_for(bounds: &Bounds) -> Result<Rational> {
    if bounds.degree < 2 {
        return Ok(Rational::from(21));
    }
    lambda_bound(bounds.nvars, bounds.terms, bounds.degree)
}

/// Probabilistic recovery from one random prime in `[λ, 2λ]`.
///
/// Succeeds with probability at least 1/2 over the prime draw. A bad prime
/// normally surfaces as [`Outcome::Failure`]; the checks are not proven to
/// catch every collision.
pub fn pro_mpoly_si_mk(
    mbb: &(impl BlackBox + ?Sized),
    bounds: &Bounds,
    qs: Option<&[u64]>,
    seed: u64,
) -> Result<Attempt> {
    check_box(mbb, bounds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = lambda_for(bounds)?;
    let p = random_prime_in(&lambda, &(Rational::from(2) * &lambda), &mut rng)?;
    let mut stats = Stats::default();
    let images = interpolate_images(mbb, bounds, &bounds.domain(), &[p], &mut stats)?;
    stats.chosen_prime = Some(p);
    let image = match images.into_iter().next().expect("one prime").poly {
        Outcome::Success(img) => img,
        Outcome::Failure(f) => return Ok(Attempt { outcome: Outcome::Failure(f), stats }),
    };
    let map = KroneckerMap::new(bounds.nvars, bounds.degree, p)?;
    let outcome = diversify(mbb, bounds, map, &image, qs, &mut stats)?;
    Ok(Attempt { outcome, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PolyBox;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn poly(n: usize, terms: &[(Rational, &[u64])]) -> MultiPoly {
        MultiPoly::new(n, terms.iter().map(|(c, e)| MultiTerm::new(c.clone(), e.to_vec()))).unwrap()
    }

    fn example() -> MultiPoly {
        poly(2, &[(q(1, 1), &[1, 1]), (q(-1, 1), &[0, 2])])
    }

    #[test]
    fn recover_terms_trace() {
        let image = SparsePoly::from_pairs([(1, 4), (-1, 6)]);
        let ctx = RecoveryContext::new(&image, &[2, 3], 2, 1).unwrap();
        assert_eq!(ctx.beta(), &BigInt::from(19));
        let b = Rational::from(19);
        let g = Rational::from(6) * b.pow(4) - Rational::from(9) * b.pow(6);
        let mut terms = recover_terms(&g, &ctx).unwrap();
        assert_eq!(terms[0], MultiTerm::new(q(-1, 1), vec![0, 2]));
        assert_eq!(terms[1], MultiTerm::new(q(1, 1), vec![1, 1]));
        terms.sort_by(|a, b| crate::domain::grlex(&a.exponents, &b.exponents));
        assert_eq!(MultiPoly::new(2, terms).unwrap(), example());
    }

    #[test]
    fn recover_constant() {
        let image = SparsePoly::from_pairs([(q(5, 2), 0)]);
        let ctx = RecoveryContext::new(&image, &[2, 3, 5], 3, 3).unwrap();
        let terms = recover_terms(&q(5, 2), &ctx).unwrap();
        assert_eq!(terms, vec![MultiTerm::new(q(5, 2), vec![0, 0, 0])]);
    }

    #[test]
    fn recover_rejects_cofactor() {
        let image = SparsePoly::from_pairs([(1, 0)]);
        let ctx = RecoveryContext::new(&image, &[2, 3], 2, 4).unwrap();
        assert_eq!(recover_terms(&Rational::from(7), &ctx), Outcome::Failure(Failure::Cofactor));
        assert_eq!(recover_terms(&Rational::from(16), &ctx), Outcome::Failure(Failure::ExponentSumAboveBound));
        let ctx = RecoveryContext::new(&SparsePoly::from_pairs([(2, 0)]), &[2, 3], 2, 4).unwrap();
        assert_eq!(recover_terms(&Rational::from(9), &ctx), Outcome::Failure(Failure::NotDivisible));
    }

    #[test]
    fn deterministic_examples() {
        let b = Bounds::new(2, 2, 2, 1, 1).unwrap();
        let bb = PolyBox::new(example());
        let r = mpoly_si_mk(&bb, &b, None).unwrap();
        assert_eq!(r.poly, example());
        assert_eq!(r.stats.image_probes, good_prime_count_bound(2, 2, 2));
        assert_eq!(r.stats.diversified_probes, 1);
        assert_eq!(bb.probes(), r.stats.total_probes());

        let zero = PolyBox::new(MultiPoly::zero(2));
        assert!(mpoly_si_mk(&zero, &b, None).unwrap().poly.is_empty());

        let cubic = poly(1, &[(q(3, 2), &[3])]);
        let r = mpoly_si_mk(&PolyBox::new(cubic.clone()), &Bounds::new(1, 3, 1, 2, 2).unwrap(), None).unwrap();
        assert_eq!(r.poly, cubic);
    }

    #[test]
    fn integer_examples() {
        let f = poly(2, &[(q(1, 1), &[2, 0]), (q(1, 1), &[0, 1]), (q(1, 1), &[0, 0])]);
        let b = Bounds::new(2, 2, 3, 1, 1).unwrap();
        let r = mpoly_si_mk_int(&PolyBox::new(f.clone()), &b, None).unwrap();
        assert_eq!(r.poly, f);
        assert_eq!(r.stats.verification_probes, 0);
        let zero = PolyBox::new(MultiPoly::zero(2));
        assert!(mpoly_si_mk_int(&zero, &b, None).unwrap().poly.is_empty());
        let g = poly(2, &[(q(7, 1), &[1, 1])]);
        let r = mpoly_si_mk_int(&PolyBox::new(g.clone()), &Bounds::new(2, 2, 1, 7, 1).unwrap(), None).unwrap();
        assert_eq!(r.poly, g);
        assert!(mpoly_si_mk_int(&PolyBox::new(g), &Bounds::new(2, 2, 1, 7, 2).unwrap(), None).is_err());
    }

    #[test]
    fn probabilistic_examples() {
        let b = Bounds::new(2, 2, 2, 1, 1).unwrap();
        let mut successes = 0;
        for seed in 0..20 {
            let bb = PolyBox::new(example());
            let a = pro_mpoly_si_mk(&bb, &b, None, seed).unwrap();
            assert_eq!(a.stats.image_probes, 1);
            if let Outcome::Success(p) = a.outcome {
                assert_eq!(p, example());
                assert_eq!(bb.probes(), 2);
                successes += 1;
            }
        }
        assert!(successes >= 10);
        let zero = PolyBox::new(MultiPoly::zero(2));
        assert_eq!(pro_mpoly_si_mk(&zero, &b, None, 1).unwrap().outcome, Outcome::Success(MultiPoly::zero(2)));
    }

    #[test]
    fn explicit_qs() {
        let b = Bounds::new(2, 2, 2, 1, 1).unwrap();
        let r = mpoly_si_mk(&PolyBox::new(example()), &b, Some(&[5, 7])).unwrap();
        assert_eq!(r.poly, example());
        assert!(mpoly_si_mk(&PolyBox::new(example()), &b, Some(&[5])).is_err());
    }

    #[test]
    fn bounds_check() {
        let b = Bounds::new(2, 2, 2, 1, 1).unwrap();
        assert!(b.check(&example()).is_ok());
        assert!(b.check(&poly(2, &[(q(1, 2), &[1, 0])])).is_err());
        assert!(b.check(&poly(2, &[(q(1, 1), &[3, 0])])).is_err());
        assert!(Bounds::new(2, 0, 2, 1, 1).is_err());
        assert!(mpoly_si_mk(&PolyBox::new(example()), &Bounds::new(3, 2, 2, 1, 1).unwrap(), None).is_err());
    }
}
