//! Exponential-time references for the fast paths in `sparse-interp`.
//!
//! Nothing here shares code with the routines it checks beyond the
//! `Rational` type and the polynomial containers.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};
use sparse_interp::univariate::Interval;
use sparse_interp::{CoefficientDomain, MultiPoly, Rational, SparsePoly, Term};

/// Smallest `a <= cap` with an integer strictly inside `(a lo, a hi)`.
pub fn mini_denom_bruteforce(iv: &Interval, cap: u64) -> Option<u64> {
    (1..=cap).find(|&a| {
        let a = Rational::from(a);
        let lo = &a * iv.lo();
        let hi = &a * iv.hi();
        Rational::from(lo.floor() + 1) < hi
    })
}

fn value_at(coeffs: &[Rational], beta: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut power = Rational::one();
    for c in coeffs {
        acc = &acc + &(c * &power);
        power = &power * beta;
    }
    acc
}

/// Two distinct coefficient vectors over `elements` of length `degree + 1`
/// that take the same value at `beta`, if any exist.
pub fn collision_at(elements: &[Rational], degree: u64, beta: &Rational) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let len = degree as usize + 1;
    let total = elements.len().checked_pow(len as u32).expect("enumeration too large");
    let mut seen: HashMap<Rational, Vec<Rational>> = HashMap::with_capacity(total);
    for mut idx in 0..total {
        let coeffs: Vec<Rational> = (0..len)
            .map(|_| {
                let c = elements[idx % elements.len()].clone();
                idx /= elements.len();
                c
            })
            .collect();
        let v = value_at(&coeffs, beta);
        if let Some(prev) = seen.get(&v) {
            return Some((prev.clone(), coeffs));
        }
        seen.insert(v, coeffs);
    }
    None
}

/// Whether every polynomial over the domain (zero included) with degree
/// `<= degree_bound` has a distinct value at `beta`.
pub fn uniqueness_check_at(domain: &CoefficientDomain, degree_bound: u64, beta: &BigInt) -> bool {
    collision_at(&domain.elements(), degree_bound, &Rational::from(beta.clone())).is_none()
}

/// [`uniqueness_check_at`] at the smallest admissible probe `2C/ε + 1`.
pub fn uniqueness_check(domain: &CoefficientDomain, degree_bound: u64) -> bool {
    uniqueness_check_at(domain, degree_bound, &domain.beta_min())
}

/// `(D+1)^(i-1) mod p` for every variable, from the full power.
fn exponents_by_power(nvars: usize, degree_bound: u64, p: u64) -> Vec<u64> {
    let base = BigInt::from(degree_bound + 1);
    let p = BigInt::from(p);
    (0..nvars)
        .map(|i| (Pow::pow(&base, i as u64) % &p).to_u64().expect("residue below p"))
        .collect()
}

/// The substituted image `f(x, x^k_2, ...)` from full powers of `D + 1`.
pub fn substitute_bruteforce(f: &MultiPoly, degree_bound: u64, p: u64) -> SparsePoly {
    let ks = exponents_by_power(f.nvars(), degree_bound, p);
    SparsePoly::from_terms(f.terms().iter().map(|t| {
        let d = t.exponents.iter().zip(&ks).map(|(e, k)| e * k).sum();
        Term::new(t.coeff.clone(), d)
    }))
}

/// Whether `p` maps the monomials of `f` to distinct degrees.
pub fn is_good_bruteforce(f: &MultiPoly, degree_bound: u64, p: u64) -> bool {
    let ks = exponents_by_power(f.nvars(), degree_bound, p);
    let mut seen = HashSet::new();
    f.terms()
        .iter()
        .all(|t| seen.insert(t.exponents.iter().zip(&ks).map(|(e, k)| e * k).sum::<u64>()))
}

/// Fraction of `primes` that are good for `f`.
pub fn good_prime_density(f: &MultiPoly, degree_bound: u64, primes: &[u64]) -> Rational {
    assert!(!primes.is_empty(), "density over an empty prime list");
    let good = primes.iter().filter(|&&p| is_good_bruteforce(f, degree_bound, p)).count();
    Rational::new(good as i64, primes.len() as i64)
}

/// Primes in `[lo, hi]` by trial division.
pub fn primes_by_trial_division(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use sparse_interp::MultiTerm;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn iv(a: Rational, b: Rational) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn mini_denom_examples() {
        assert_eq!(mini_denom_bruteforce(&iv(q(1, 3), q(1, 2)), 10), Some(5));
        assert_eq!(mini_denom_bruteforce(&iv(q(9, 10), q(11, 10)), 10), Some(1));
        assert_eq!(mini_denom_bruteforce(&iv(q(1, 1000), q(2, 1000)), 10), None);
        assert_eq!(mini_denom_bruteforce(&iv(q(1, 1000), q(2, 1000)), 600), Some(501));
    }

    #[test]
    fn uniqueness_examples() {
        let d21 = CoefficientDomain::new(2, 1).unwrap();
        assert!(uniqueness_check(&d21, 3));
        assert!(uniqueness_check(&CoefficientDomain::new(1, 1).unwrap(), 0));
        assert!(!uniqueness_check_at(&d21, 3, &BigInt::from(2)));
        let (a, b) = collision_at(&d21.elements(), 3, &q(2, 1)).unwrap();
        assert_ne!(a, b);
        assert_eq!(value_at(&a, &q(2, 1)), value_at(&b, &q(2, 1)));
    }

    #[test]
    fn density_examples() {
        let f = MultiPoly::new(2, [MultiTerm::new(q(1, 1), vec![2, 0]), MultiTerm::new(q(1, 1), vec![0, 1])]).unwrap();
        assert_eq!(good_prime_density(&f, 4, &[3, 5]), q(1, 2));
        let single = MultiPoly::new(3, [MultiTerm::new(q(2, 1), vec![1, 2, 0])]).unwrap();
        assert_eq!(good_prime_density(&single, 3, &[3, 5, 7, 11]), q(1, 1));
        let g = MultiPoly::new(2, [MultiTerm::new(q(1, 1), vec![1, 1]), MultiTerm::new(q(-1, 1), vec![0, 2])]).unwrap();
        // p=3: k=(1,0) gives degrees 1 and 0; p=5: (1,3) gives 4, 6; p=7: (1,3) gives 4, 6
        assert_eq!(good_prime_density(&g, 2, &[3, 5, 7]), q(1, 1));
        assert_eq!(primes_by_trial_division(21, 42), vec![23, 29, 31, 37, 41]);
    }
}
