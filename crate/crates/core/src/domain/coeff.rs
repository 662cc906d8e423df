use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed};

use crate::error::{invalid, Result};

use super::Rational;

/// Bounded-rational coefficient set `{ b/a : 0 < a <= H, |b/a| <= C }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDomain {
    magnitude: u64,
    denominator: u64,
    epsilon: Rational,
    epsilon1: Rational,
    epsilon2: Rational,
}

impl CoefficientDomain {
    pub fn new(magnitude: u64, denominator: u64) -> Result<Self> {
        if magnitude == 0 || denominator == 0 {
            return Err(invalid(format!(
                "coefficient bounds must be positive (C={magnitude}, H={denominator})"
            )));
        }
        let h = denominator;
        // Two distinct fractions with denominators <= H differ by at least
        // 1/(H(H-1)); integers (H = 1) differ by at least 1.
        let epsilon1 = if h >= 2 { Rational::new(1, BigInt::from(h) * (h - 1)) } else { Rational::one() };
        let epsilon2 = Rational::new(1, h);
        let epsilon = epsilon1.clone().min(epsilon2.clone());
        Ok(Self { magnitude, denominator, epsilon, epsilon1, epsilon2 })
    }

    /// `C`
    pub fn magnitude(&self) -> u64 {
        self.magnitude
    }

    /// `H`
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn epsilon1(&self) -> &Rational {
        &self.epsilon1
    }

    pub fn epsilon2(&self) -> &Rational {
        &self.epsilon2
    }

    pub fn contains(&self, x: &Rational) -> bool {
        x.abs() <= Rational::from(self.magnitude) && x.denom() <= &BigInt::from(self.denominator)
    }

    /// Smallest admissible probe point, `2C/ε + 1`.
    pub fn beta_min(&self) -> BigInt {
        let two_c = Rational::from(2 * BigInt::from(self.magnitude));
        let q = &two_c / &self.epsilon;
        debug_assert!(q.is_integer());
        q.floor() + 1
    }

    pub fn probe(&self) -> UnivariateProbe {
        UnivariateProbe::new(self.beta_min(), self.epsilon.clone(), BigInt::from(self.magnitude))
            .expect("beta_min satisfies the probe bound")
    }

    /// Every element of the set, ascending. Only sensible for small bounds.
    pub fn elements(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for a in 1..=self.denominator {
            let top = self.magnitude.saturating_mul(a) as i64;
            for b in -top..=top {
                if b.unsigned_abs().gcd(&a) == 1 {
                    out.push(Rational::new(b, a));
                }
            }
        }
        out.sort();
        out
    }
}

pub fn make_rational_domain(magnitude: u64, denominator: u64) -> Result<CoefficientDomain> {
    CoefficientDomain::new(magnitude, denominator)
}

pub fn beta_min(domain: &CoefficientDomain) -> BigInt {
    domain.beta_min()
}

/// An explicit finite coefficient set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    elements: Vec<Rational>,
    magnitude: BigInt,
    epsilon: Rational,
}

impl FiniteSet {
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elements: Vec<Rational> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        let epsilon2 = elements
            .iter()
            .filter(|a| !a.is_zero())
            .map(Rational::abs)
            .min()
            .ok_or_else(|| invalid("coefficient set needs a nonzero element"))?;
        let epsilon1 = elements.windows(2).map(|w| &w[1] - &w[0]).min();
        let epsilon = match epsilon1 {
            Some(e1) => e1.min(epsilon2),
            None => epsilon2,
        };
        let max_abs = elements.iter().map(Rational::abs).max().expect("nonempty");
        Ok(Self { elements, magnitude: max_abs.ceil(), epsilon })
    }

    /// The integers `-c..=c`.
    pub fn integers(c: i64) -> Result<Self> {
        Self::new((-c..=c).map(Rational::from))
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    /// Integer upper bound on the largest magnitude.
    pub fn magnitude(&self) -> &BigInt {
        &self.magnitude
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Probe at `⌈2C/ε⌉ + 1`.
    pub fn probe(&self) -> UnivariateProbe {
        let q = Rational::from(2 * &self.magnitude) / &self.epsilon;
        UnivariateProbe::new(q.ceil() + 1, self.epsilon.clone(), self.magnitude.clone())
            .expect("probe satisfies its own bound")
    }
}

const LOG_SCALE: u64 = 1024;

/// A probe point together with the separation data needed to decode it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateProbe {
    beta: BigInt,
    epsilon: Rational,
    magnitude: BigInt,
    // bit length of beta^LOG_SCALE: brackets log2(beta) within 1/LOG_SCALE
    log_bits: u64,
}

impl UnivariateProbe {
    /// Requires `beta >= 2C/ε + 1`.
    pub fn new(beta: BigInt, epsilon: Rational, magnitude: BigInt) -> Result<Self> {
        if !epsilon.is_positive() || !magnitude.is_positive() {
            return Err(invalid("probe needs positive epsilon and magnitude bound"));
        }
        let needed = Rational::from(2 * &magnitude) / &epsilon + Rational::one();
        if Rational::from(beta.clone()) < needed {
            return Err(invalid(format!("probe point {beta} is below 2C/eps + 1 = {needed}")));
        }
        let log_bits = Pow::pow(&beta, LOG_SCALE).bits();
        Ok(Self { beta, epsilon, magnitude, log_bits })
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn magnitude(&self) -> &BigInt {
        &self.magnitude
    }

    pub fn power(&self, d: u64) -> BigInt {
        Pow::pow(&self.beta, d)
    }

    /// Largest `d >= 0` with `lhs * beta^d < rhs`, together with `beta^d`.
    /// Returns `None` when even `d = 0` fails.
    pub(crate) fn largest_power_below(&self, lhs: &BigInt, rhs: &BigInt) -> Option<(u64, BigInt)> {
        if lhs >= rhs {
            return None;
        }
        // 2^(a-1) <= rhs < 2^a, 2^(b-1) <= lhs < 2^b, and
        // (k-1)/S <= log2(beta) < k/S with k = bits(beta^S).
        let (a, b) = (rhs.bits() as i64, lhs.bits() as i64);
        let (k, s) = (self.log_bits as i64, LOG_SCALE as i64);
        let lo = if a - 1 - b > 0 { (a - 1 - b) * s / k } else { 0 };
        let hi = ((a - b + 1).max(0) * s + k - 2) / (k - 1);
        let hi = hi.max(lo);
        let (mut lo, mut hi) = (lo as u64, hi as u64);
        let mut pow_lo = self.power(lo);
        if lhs * &pow_lo >= *rhs {
            // the lower bracket always passes; stay exact if it ever does not
            lo = 0;
            pow_lo = BigInt::from(1);
        }
        // invariant: lhs * beta^lo < rhs, and every d > hi fails
        while hi - lo > 8 {
            let mid = lo + (hi - lo + 1) / 2;
            let pow_mid = &pow_lo * self.power(mid - lo);
            if lhs * &pow_mid < *rhs {
                lo = mid;
                pow_lo = pow_mid;
            } else {
                hi = mid - 1;
            }
        }
        while lo < hi {
            let next = &pow_lo * &self.beta;
            if lhs * &next < *rhs {
                lo += 1;
                pow_lo = next;
            } else {
                break;
            }
        }
        Some((lo, pow_lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rational_domain_epsilon() {
        assert_eq!(make_rational_domain(2, 2).unwrap().epsilon(), &Rational::new(1, 2));
        assert_eq!(make_rational_domain(3, 1).unwrap().epsilon(), &Rational::one());
        assert_eq!(make_rational_domain(10, 4).unwrap().epsilon(), &Rational::new(1, 12));
        let d = make_rational_domain(10, 4).unwrap();
        assert_eq!(d.epsilon1(), &Rational::new(1, 12));
        assert_eq!(d.epsilon2(), &Rational::new(1, 4));
        assert!(make_rational_domain(0, 3).is_err());
        assert!(make_rational_domain(3, 0).is_err());
    }

    #[test]
    fn beta_min_values() {
        assert_eq!(beta_min(&make_rational_domain(3, 1).unwrap()), BigInt::from(7));
        assert_eq!(beta_min(&make_rational_domain(2, 2).unwrap()), BigInt::from(9));
        assert_eq!(beta_min(&make_rational_domain(1, 1).unwrap()), BigInt::from(3));
    }

    #[test]
    fn separation_by_enumeration() {
        for c in 1..=3 {
            for h in 1..=5 {
                let d = make_rational_domain(c, h).unwrap();
                let elems = d.elements();
                let gap = elems.windows(2).map(|w| &w[1] - &w[0]).min().unwrap();
                assert!(&gap >= d.epsilon1(), "C={c} H={h}");
                let smallest = elems.iter().filter(|x| !x.is_zero()).map(Rational::abs).min().unwrap();
                assert_eq!(&smallest, d.epsilon2());
                for x in &elems {
                    assert!(d.contains(x));
                }
                assert!(!d.contains(&Rational::new(1, h as i64 + 1)));
                assert!(!d.contains(&Rational::from(c + 1)));
            }
        }
    }

    #[test]
    fn finite_set_summary() {
        let a = FiniteSet::integers(3).unwrap();
        assert_eq!(a.epsilon(), &Rational::one());
        assert_eq!(a.magnitude(), &BigInt::from(3));
        assert_eq!(a.probe().beta(), &BigInt::from(7));
        assert!(FiniteSet::new([Rational::zero()]).is_err());
        let b = FiniteSet::new([Rational::new(1, 3), Rational::new(-5, 2)]).unwrap();
        assert_eq!(b.epsilon(), &Rational::new(1, 3));
        assert_eq!(b.magnitude(), &BigInt::from(3));
    }

    #[test]
    fn probe_bound_enforced() {
        assert!(UnivariateProbe::new(BigInt::from(6), Rational::one(), BigInt::from(3)).is_err());
        assert!(UnivariateProbe::new(BigInt::from(7), Rational::one(), BigInt::from(3)).is_ok());
    }

    #[test]
    fn largest_power_matches_linear_scan() {
        let probe = UnivariateProbe::new(BigInt::from(7), Rational::one(), BigInt::from(3)).unwrap();
        for rhs in [2u64, 7, 8, 49, 50, 343, 1364, 2401, 2402, 10_000_000] {
            let rhs = BigInt::from(rhs);
            let lhs = BigInt::one();
            let mut expect = None;
            let mut d = 0u32;
            while Pow::pow(&BigInt::from(7), d) < rhs {
                expect = Some(d as u64);
                d += 1;
            }
            assert_eq!(probe.largest_power_below(&lhs, &rhs).map(|x| x.0), expect, "rhs={rhs}");
        }
        let big = Pow::pow(&BigInt::from(7), 5000u32);
        let (d, p) = probe.largest_power_below(&BigInt::one(), &(&big + 1)).unwrap();
        assert_eq!(d, 5000);
        assert_eq!(p, big);
        let (d, _) = probe.largest_power_below(&BigInt::one(), &big).unwrap();
        assert_eq!(d, 4999);
    }
}
