use proptest::prelude::*;
use sparse_interp::domain::{FiniteSet, UnivariateProbe};
use sparse_interp::gen::{monomial_count, random_multi_poly, random_sparse_poly, rng_from_seed};
use sparse_interp::kronecker::{
    first_odd_primes, good_prime_count_bound, is_good_prime, lambda_range, substituted_blackbox, KroneckerMap,
};
use sparse_interp::multivariate::{lambda_for, mpoly_si_mk, pro_mpoly_si_mk, window_violations, Bounds};
use sparse_interp::primes::primes_between;
use sparse_interp::univariate::{decode_value, mini_denom, udeg, ulcoef_rat, upoly_si, upoly_si_rat, Interval};
use sparse_interp::{BlackBox, CoefficientDomain, Outcome, PolyBox, Rational, SparsePoly};
use sparse_interp_oracle::{good_prime_density, mini_denom_bruteforce, substitute_bruteforce};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn univariate_roundtrip_single_probe(
        seed in any::<u64>(),
        d in 0u64..300,
        c in 1u64..5000,
        h in 1u64..40,
        t_frac in 0.0f64..1.0,
    ) {
        let t = ((t_frac * (d + 1).min(30) as f64) as usize).max(1);
        let f = random_sparse_poly(&mut rng_from_seed(seed), d, t, c, h).unwrap();
        let bb = PolyBox::new(f.clone());
        prop_assert_eq!(upoly_si_rat(&bb, c, h, None).unwrap(), Outcome::Success(f.clone()));
        prop_assert_eq!(bb.probes(), 1);
        // peeled degrees strictly decrease
        let domain = CoefficientDomain::new(c, h).unwrap();
        let trace = decode_value(&f.eval(&Rational::from(domain.beta_min())), &domain).unwrap();
        prop_assert!(trace.windows(2).all(|w| w[0].degree > w[1].degree));
    }

    #[test]
    fn leading_coefficient_lies_in_window(seed in any::<u64>(), d in 0u64..60, c in 1u64..200, h in 1u64..20) {
        let f = random_sparse_poly(&mut rng_from_seed(seed), d, ((d + 1) as usize).min(6), c, h).unwrap();
        let domain = CoefficientDomain::new(c, h).unwrap();
        let probe = domain.probe();
        let beta = Rational::from(probe.beta().clone());
        let value = f.eval(&beta);
        let top = udeg(&value, &probe).unwrap();
        prop_assert_eq!(Some(top), f.degree());
        let lc = ulcoef_rat(&value, &probe, top, h).unwrap();
        let x = &value / &beta.pow(top);
        let half = domain.epsilon() / &Rational::from(2);
        prop_assert!((&x - &lc).abs() < half);
    }

    #[test]
    fn finite_set_roundtrip(seed in any::<u64>(), raw in prop::collection::vec((-30i64..30, 1i64..6), 1..8)) {
        prop_assume!(raw.iter().any(|&(a, _)| a != 0));
        let set = FiniteSet::new(raw.iter().map(|&(a, b)| Rational::new(a, b))).unwrap();
        let nonzero: Vec<Rational> = set.elements().iter().filter(|x| !x.is_zero()).cloned().collect();
        prop_assume!(!nonzero.is_empty());
        let mut rng = rng_from_seed(seed);
        let degrees = rand::seq::index::sample(&mut rng, 40, 6).into_vec();
        let f = SparsePoly::from_pairs(
            degrees.iter().enumerate().map(|(i, &d)| (nonzero[i % nonzero.len()].clone(), d as u64)),
        );
        let bb = PolyBox::new(f.clone());
        prop_assert_eq!(upoly_si(&bb, &set).unwrap(), f);
        prop_assert_eq!(bb.probes(), 1);
    }

    #[test]
    fn mini_denom_matches_bruteforce(p1 in 1i64..400, q1 in 1i64..60, p2 in 1i64..400, q2 in 1i64..60) {
        let (a, b) = (Rational::new(p1, q1), Rational::new(p2, q2));
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let iv = Interval::new(lo, hi).unwrap();
        let fast = mini_denom(&iv).unwrap();
        match mini_denom_bruteforce(&iv, 200) {
            Some(slow) => prop_assert_eq!(fast, slow.into()),
            None => prop_assert!(fast > 200u32.into()),
        }
    }

    #[test]
    fn domain_membership_is_exact(c in 1u64..4, h in 1u64..6, n in -30i64..30, d in 1i64..10) {
        let domain = CoefficientDomain::new(c, h).unwrap();
        let x = Rational::new(n, d);
        let listed = domain.elements().contains(&x);
        prop_assert_eq!(domain.contains(&x), listed);
        prop_assert_eq!(listed, x.abs() <= Rational::from(c) && x.denom() <= &h.into());
    }

    #[test]
    fn substitution_agrees_with_bruteforce(seed in any::<u64>(), n in 1usize..4, d in 1u64..6, pi in 0usize..8) {
        let t = 5.min(monomial_count(n, d));
        let f = random_multi_poly(&mut rng_from_seed(seed), n, d, t, 9, 3).unwrap();
        let p = first_odd_primes(8)[pi];
        let map = KroneckerMap::new(n, d, p).unwrap();
        let symbolic = map.substitute(&f).unwrap();
        prop_assert_eq!(&symbolic, &substitute_bruteforce(&f, d, p));
        let bb = PolyBox::new(f.clone());
        let sub = substituted_blackbox(&bb, &map).unwrap();
        for x in [-3i64, 2, 5] {
            prop_assert_eq!(sub.probe_at(&Rational::from(x)).unwrap(), symbolic.eval(&Rational::from(x)));
        }
        if is_good_prime(&f.exponent_vectors(), d, p) {
            prop_assert_eq!(symbolic.len(), f.len());
        } else {
            prop_assert!(symbolic.len() < f.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deterministic_roundtrip_and_probe_accounting(
        seed in any::<u64>(),
        n in 1usize..4,
        d in 1u64..8,
        t in 1usize..6,
        c in 1u64..60,
        h in 1u64..8,
    ) {
        let t = t.min(monomial_count(n, d));
        let b = Bounds::new(n, d, t, c, h).unwrap();
        let f = random_multi_poly(&mut rng_from_seed(seed), n, d, t, c, h).unwrap();
        let bb = PolyBox::new(f.clone());
        let r = mpoly_si_mk(&bb, &b, None).unwrap();
        prop_assert_eq!(&r.poly, &f);
        let count = good_prime_count_bound(n, d, t);
        prop_assert_eq!(r.stats.image_probes, count);
        prop_assert_eq!(r.stats.diversified_probes, 1);
        prop_assert_eq!(bb.probes(), count + r.stats.verification_probes + 1);
        let p = r.stats.chosen_prime.unwrap();
        prop_assert!(is_good_prime(&f.exponent_vectors(), d, p));
    }

    #[test]
    fn probabilistic_probes_and_soundness(seed in any::<u64>(), n in 2usize..4, d in 2u64..8, t in 2usize..6) {
        let t = t.min(monomial_count(n, d));
        let b = Bounds::new(n, d, t, 20, 4).unwrap();
        let f = random_multi_poly(&mut rng_from_seed(seed), n, d, t, 20, 4).unwrap();
        let bb = PolyBox::new(f.clone());
        let a = pro_mpoly_si_mk(&bb, &b, None, seed).unwrap();
        let p = a.stats.chosen_prime.unwrap();
        let (lo, hi) = lambda_range(&lambda_for(&b).unwrap());
        prop_assert!(lo <= p.into() && hi >= p.into());
        prop_assert_eq!(a.stats.image_probes, 1);
        prop_assert_eq!(a.stats.verification_probes, 0);
        prop_assert!(bb.probes() <= 2);
        match a.outcome {
            Outcome::Success(g) => {
                prop_assert_eq!(bb.probes(), 2);
                prop_assert_eq!(g, f);
            }
            Outcome::Failure(_) => prop_assert!(!is_good_prime(&f.exponent_vectors(), d, p)),
        }
    }
}

#[test]
fn lambda_primes_are_mostly_good() {
    let mut rng = rng_from_seed(77);
    let mut total = Rational::zero();
    let instances = 200;
    for _ in 0..instances {
        use rand::Rng;
        let n = rng.gen_range(2..=4usize);
        let d = rng.gen_range(2..=15u64);
        let t = rng.gen_range(2..=8usize).min(monomial_count(n, d));
        let b = Bounds::new(n, d, t, 10, 3).unwrap();
        let f = random_multi_poly(&mut rng, n, d, t, 10, 3).unwrap();
        let (lo, hi) = lambda_range(&lambda_for(&b).unwrap());
        let primes = primes_between(lo.try_into().unwrap(), hi.try_into().unwrap());
        total = &total + &good_prime_density(&f, d, &primes);
    }
    let mean = &total / &Rational::from(instances);
    assert!(mean >= Rational::new(45, 100), "mean density {}", mean.to_f64());
}

#[test]
fn probe_constructor_rejects_small_beta() {
    let domain = CoefficientDomain::new(3, 2).unwrap();
    let ok = UnivariateProbe::new(domain.beta_min(), domain.epsilon().clone(), 3.into());
    let too_small = UnivariateProbe::new(domain.beta_min() - 1, domain.epsilon().clone(), 3.into());
    assert!(ok.is_ok() && too_small.is_err());
}

#[test]
fn no_window_hits_in_this_binary() {
    // runs alongside the suites above; the counter is process-wide
    let b = Bounds::new(2, 2, 2, 1, 1).unwrap();
    let f = sparse_interp::domain::text::parse_poly("vars 2\n1 1 1\n-1 0 2\n").unwrap();
    assert_eq!(mpoly_si_mk(&PolyBox::new(f), &b, None).unwrap().stats.diversified_probes, 1);
    assert_eq!(window_violations(), 0);
}
