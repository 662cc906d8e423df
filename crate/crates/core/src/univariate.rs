//! Univariate recovery from a single probe.
//!
//! With `β >= 2C/ε + 1` the value `f(β)` behaves like a base-`β` numeral whose
//! digits are drawn from the coefficient set: the leading degree is the
//! largest `d` with `ε β^d < 2|f(β)|`, the leading coefficient is the unique
//! set element within `ε/2` of `f(β)/β^d`, and subtracting that term exposes
//! the next one.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::domain::{BlackBox, CoefficientDomain, FiniteSet, Rational, SparsePoly, Term, UnivariateProbe};
use crate::error::{invalid, Error, Result};
use crate::outcome::{Failure, Outcome};

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(invalid(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }
}

/// Leading degree of the polynomial whose value at `β` is `value`, plus `β^d`.
fn leading_degree(value: &Rational, probe: &UnivariateProbe) -> Option<(u64, BigInt)> {
    // ε β^d < 2|n/m|  <=>  e_n m β^d < 2 e_d |n|
    let eps = probe.epsilon();
    let lhs = eps.numer() * value.denom();
    let rhs = 2 * eps.denom() * value.numer().abs();
    probe.largest_power_below(&lhs, &rhs)
}

/// Degree of the residue polynomial behind `value`.
pub fn udeg(value: &Rational, probe: &UnivariateProbe) -> Result<u64> {
    if value.is_zero() {
        return Err(Error::NoTerm);
    }
    leading_degree(value, probe)
        .map(|(d, _)| d)
        .ok_or_else(|| Error::NotInDomain(format!("|{value}| is below half the separation")))
}

/// Leading coefficient over an explicit finite set.
pub fn ulcoef_finite(value: &Rational, probe: &UnivariateProbe, d: u64, set: &FiniteSet) -> Result<Rational> {
    decode_finite(value, probe, &probe.power(d), set)
}

fn decode_finite(value: &Rational, probe: &UnivariateProbe, power: &BigInt, set: &FiniteSet) -> Result<Rational> {
    // x = value / β^d; compare against set elements without forming x.
    let scaled_den = value.denom() * power;
    let cmp_x = |c: &Rational| (value.numer() * c.denom()).cmp(&(c.numer() * &scaled_den));
    let within = |c: &Rational| {
        // |n c_d - c_n m P| * 2 e_d < e_n * m P c_d
        let eps = probe.epsilon();
        let diff = (value.numer() * c.denom() - c.numer() * &scaled_den).abs();
        diff * 2 * eps.denom() < eps.numer() * &scaled_den * c.denom()
    };
    let elems = set.elements();
    // first element strictly above x
    let pos = elems.partition_point(|c| cmp_x(c).is_ge());
    let candidates = [pos.checked_sub(1), Some(pos)];
    candidates
        .into_iter()
        .flatten()
        .filter_map(|i| elems.get(i))
        .find(|c| within(c))
        .cloned()
        .ok_or_else(|| Error::NotInDomain(format!("no set element within ε/2 of {value}/β^d")))
}

/// Positive fraction without a coprimality invariant; keeps the minimal
/// denominator search free of gcds on probe-sized numbers.
#[derive(Clone, Debug)]
struct Frac {
    num: BigUint,
    den: BigUint,
}

impl Frac {
    fn from_rational(r: &Rational) -> Self {
        Frac { num: r.numer().magnitude().clone(), den: r.denom().magnitude().clone() }
    }

    fn is_integer(&self) -> bool {
        (&self.num % &self.den).is_zero()
    }

    fn floor(&self) -> BigUint {
        &self.num / &self.den
    }
}

fn min_denominator_rec(lo: &Frac, hi: &Frac, budget: &mut u64) -> Result<BigUint> {
    if *budget == 0 {
        return Err(Error::Internal("minimal-denominator recursion exceeded its depth cap".into()));
    }
    *budget -= 1;
    let (lo_int, hi_int) = (lo.is_integer(), hi.is_integer());
    if lo_int != hi_int {
        // smallest a with a (hi - lo) > 1
        let width_num = &hi.num * &lo.den - &lo.num * &hi.den;
        return Ok((&lo.den * &hi.den) / width_num + 1u32);
    }
    if lo_int {
        let gap = hi.floor() - lo.floor();
        return Ok(if gap.is_one() { BigUint::from(2u32) } else { BigUint::one() });
    }
    let w = lo.floor();
    if (&w + 1u32) * &hi.den < hi.num {
        return Ok(BigUint::one());
    }
    // fractional parts: ε1 = lo - w, ε2 = hi - w, both in (0, 1)
    let e1 = &lo.num - &w * &lo.den;
    let e2 = &hi.num - &w * &hi.den;
    let next_lo = Frac { num: hi.den.clone(), den: e2.clone() };
    let next_hi = Frac { num: lo.den.clone(), den: e1 };
    let d1 = min_denominator_rec(&next_lo, &next_hi, budget)?;
    // smallest integer strictly above d1 / ε2
    Ok(d1 * &hi.den / e2 + 1u32)
}

fn min_denominator(lo: &Frac, hi: &Frac) -> Result<BigUint> {
    let width_bits = {
        let num = &hi.num * &lo.den - &lo.num * &hi.den;
        ((&lo.den * &hi.den) / num + 1u32).bits()
    };
    let mut budget = 4 * width_bits + 64;
    min_denominator_rec(lo, hi, &mut budget)
}

/// Smallest `a >= 1` such that an integer lies strictly inside `(a lo, a hi)`.
pub fn mini_denom(iv: &Interval) -> Result<BigUint> {
    if !iv.lo.is_positive() {
        return Err(invalid(format!("interval ({}, {}) must be positive", iv.lo, iv.hi)));
    }
    min_denominator(&Frac::from_rational(&iv.lo), &Frac::from_rational(&iv.hi))
}

/// Decoding window around `x = value/β^d` over a shared denominator `q`:
/// `(x - ε/2, x + ε/2) = (lo_num/q, hi_num/q)`.
struct Window {
    lo_num: BigInt,
    hi_num: BigInt,
    q: BigInt,
}

impl Window {
    fn new(value: &Rational, probe: &UnivariateProbe, power: &BigInt) -> Self {
        let eps = probe.epsilon();
        let centre = 2 * eps.denom() * value.numer();
        let half = eps.numer() * value.denom() * power;
        let q = 2 * eps.denom() * value.denom() * power;
        Window { lo_num: &centre - &half, hi_num: centre + half, q }
    }
}

fn to_frac(num: &BigInt, den: &BigInt) -> Frac {
    Frac { num: num.magnitude().clone(), den: den.magnitude().clone() }
}

/// Leading coefficient over the bounded-rational set with denominators `<= h`.
pub fn ulcoef_rat(value: &Rational, probe: &UnivariateProbe, d: u64, h: u64) -> Result<Rational> {
    decode_rational(value, probe, &probe.power(d), h)
}

fn decode_rational(value: &Rational, probe: &UnivariateProbe, power: &BigInt, h: u64) -> Result<Rational> {
    let w = Window::new(value, probe, power);
    // mirror negative windows onto the positive axis for the denominator search
    let (lo, hi) = if value.is_negative() {
        (to_frac(&w.hi_num, &w.q), to_frac(&w.lo_num, &w.q))
    } else {
        (to_frac(&w.lo_num, &w.q), to_frac(&w.hi_num, &w.q))
    };
    let lo_positive = if value.is_negative() { w.hi_num.is_negative() } else { w.lo_num.is_positive() };
    if !lo_positive {
        return Err(Error::NotInDomain(format!("window around {value}/β^d reaches zero")));
    }
    let a = min_denominator(&lo, &hi)?;
    if a > BigUint::from(h) {
        return Err(Error::NotInDomain(format!("nearest fraction needs denominator {a} > {h}")));
    }
    let a = BigInt::from_biguint(Sign::Plus, a);
    // smallest integer strictly above a * (x - ε/2)
    let b = (&a * &w.lo_num).div_floor(&w.q) + 1;
    if &b * &w.q >= &a * &w.hi_num {
        return Err(Error::Internal("minimal denominator produced no interior numerator".into()));
    }
    Ok(Rational::new(b, a))
}

/// Limits applied while peeling terms.
#[derive(Clone, Debug)]
pub(crate) struct PeelLimits {
    pub max_terms: Option<usize>,
    pub max_degree: Option<u64>,
    /// Report out-of-domain decodes as [`Outcome::Failure`] instead of errors.
    pub failure_values: bool,
}

enum Decoder<'a> {
    Finite(&'a FiniteSet),
    Rational { denominator: u64 },
}

fn reject(limits: &PeelLimits, cause: Failure, detail: Option<Error>) -> Result<Outcome<SparsePoly>> {
    if limits.failure_values {
        Ok(Outcome::Failure(cause))
    } else {
        Err(detail.unwrap_or_else(|| Error::NotInDomain(cause.to_string())))
    }
}

fn peel(
    value: Rational,
    probe: &UnivariateProbe,
    decoder: Decoder<'_>,
    limits: &PeelLimits,
) -> Result<Outcome<SparsePoly>> {
    let bound = Rational::from(probe.magnitude().clone());
    let mut u = value;
    let mut terms: Vec<Term> = Vec::new();
    let mut last: Option<u64> = None;
    while !u.is_zero() {
        if limits.max_terms.is_some_and(|t| terms.len() >= t) {
            return reject(limits, Failure::TooManyTerms, None);
        }
        let Some((d, power)) = leading_degree(&u, probe) else {
            return reject(limits, Failure::ResidueBelowSeparation, None);
        };
        if last.is_some_and(|prev| d >= prev) {
            return Err(Error::Internal(format!("peeled degree {d} did not decrease")));
        }
        if limits.max_degree.is_some_and(|m| d > m) {
            return reject(limits, Failure::DegreeAboveBound, None);
        }
        let decoded = match &decoder {
            Decoder::Finite(set) => decode_finite(&u, probe, &power, set),
            Decoder::Rational { denominator } => decode_rational(&u, probe, &power, *denominator),
        };
        let c = match decoded {
            Ok(c) => c,
            Err(e @ Error::NotInDomain(_)) => {
                let cause = match decoder {
                    Decoder::Rational { .. } => Failure::DenominatorTooLarge,
                    Decoder::Finite(_) => Failure::CoefficientTooLarge,
                };
                return reject(limits, cause, Some(e));
            }
            Err(e) => return Err(e),
        };
        if c.abs() > bound {
            return reject(limits, Failure::CoefficientTooLarge, None);
        }
        u = &u - &c.mul_int(&power);
        terms.push(Term::new(c, d));
        last = Some(d);
    }
    terms.reverse();
    Ok(Outcome::Success(SparsePoly::from_terms(terms)))
}

fn require_univariate(bb: &(impl BlackBox + ?Sized)) -> Result<()> {
    if bb.arity() != 1 {
        return Err(invalid(format!("univariate interpolation needs arity 1, box has {}", bb.arity())));
    }
    Ok(())
}

/// Recovers a polynomial with coefficients in an explicit finite set from one probe.
pub fn upoly_si(bb: &(impl BlackBox + ?Sized), set: &FiniteSet) -> Result<SparsePoly> {
    require_univariate(bb)?;
    let probe = set.probe();
    let value = bb.probe_at(&Rational::from(probe.beta().clone()))?;
    let limits = PeelLimits { max_terms: None, max_degree: None, failure_values: false };
    peel(value, &probe, Decoder::Finite(set), &limits).map(Outcome::unwrap)
}

/// Recovers a polynomial with coefficients `b/a`, `0 < a <= H`, `|b/a| <= C`,
/// from one probe.
///
/// With a term bound, out-of-domain coefficients and excess terms come back
/// as [`Outcome::Failure`]; without one they are errors.
pub fn upoly_si_rat(
    bb: &(impl BlackBox + ?Sized),
    magnitude: u64,
    denominator: u64,
    max_terms: Option<usize>,
) -> Result<Outcome<SparsePoly>> {
    let domain = CoefficientDomain::new(magnitude, denominator)?;
    let limits = PeelLimits { max_terms, max_degree: None, failure_values: max_terms.is_some() };
    interpolate_image(bb, &domain, &limits)
}

pub(crate) fn interpolate_image(
    bb: &(impl BlackBox + ?Sized),
    domain: &CoefficientDomain,
    limits: &PeelLimits,
) -> Result<Outcome<SparsePoly>> {
    require_univariate(bb)?;
    let probe = domain.probe();
    let value = bb.probe_at(&Rational::from(probe.beta().clone()))?;
    peel(value, &probe, Decoder::Rational { denominator: domain.denominator() }, limits)
}

/// Decodes an already-known probe value; the trace is the peeled terms in
/// the order they were found (descending degree).
pub fn decode_value(value: &Rational, domain: &CoefficientDomain) -> Result<Vec<Term>> {
    let probe = domain.probe();
    let limits = PeelLimits { max_terms: None, max_degree: None, failure_values: false };
    let p = peel(value.clone(), &probe, Decoder::Rational { denominator: domain.denominator() }, &limits)?.unwrap();
    Ok(p.terms().iter().rev().cloned().collect())
}
