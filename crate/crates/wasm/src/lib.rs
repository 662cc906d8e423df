//! Browser bindings for three demo operations. Each returns a JSON string;
//! the plain `*_json` functions carry the logic and are testable natively.

use num_bigint::BigInt;
use serde::Serialize;
use sparse_interp::domain::text::parse_poly;
use sparse_interp::kronecker::{first_odd_primes, is_good_prime, KroneckerMap};
use sparse_interp::univariate::{decode_value, mini_denom, Interval};
use sparse_interp::{CoefficientDomain, Rational};
use wasm_bindgen::prelude::*;

const SHOWN_DIGITS: usize = 48;

fn abbreviate(s: String) -> String {
    if s.len() <= SHOWN_DIGITS {
        return s;
    }
    format!("{}...{} ({} digits)", &s[..SHOWN_DIGITS / 2], &s[s.len() - SHOWN_DIGITS / 2..], s.len())
}

#[derive(Serialize)]
struct Step {
    degree: u64,
    coefficient: String,
    residue: String,
    residue_bits: u64,
}

#[derive(Serialize)]
struct Trace {
    beta: String,
    value: String,
    value_bits: u64,
    steps: Vec<Step>,
    recovered: String,
}

fn bits(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Evaluates a `vars 1` polynomial at the probe for `(C, H)` and decodes it
/// term by term.
pub fn trace_json(text: &str, magnitude: u64, denominator: u64) -> Result<String, String> {
    let f = parse_poly(text).map_err(|e| e.to_string())?;
    let uni = f.to_univariate().ok_or("the demo decodes univariate polynomials (`vars 1`)")?;
    let domain = CoefficientDomain::new(magnitude, denominator).map_err(|e| e.to_string())?;
    if let Some(t) = uni.terms().iter().find(|t| !domain.contains(&t.coeff)) {
        return Err(format!("coefficient {} is outside the domain", t.coeff));
    }
    let beta = Rational::from(domain.beta_min());
    let value = uni.eval(&beta);
    let terms = decode_value(&value, &domain).map_err(|e| e.to_string())?;
    let mut residue = value.clone();
    let steps = terms
        .iter()
        .map(|t| {
            residue = &residue - &(&t.coeff * &beta.pow(t.degree));
            Step {
                degree: t.degree,
                coefficient: t.coeff.to_string(),
                residue: abbreviate(residue.to_string()),
                residue_bits: bits(&residue),
            }
        })
        .collect();
    let recovered = sparse_interp::SparsePoly::from_terms(terms).to_string();
    let trace = Trace {
        beta: beta.to_string(),
        value: abbreviate(value.to_string()),
        value_bits: bits(&value),
        steps,
        recovered,
    };
    serde_json::to_string(&trace).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Denominator {
    denominator: String,
    fraction: String,
}

/// Smallest denominator of a fraction strictly inside `(lo, hi)`, `lo > 0`.
pub fn mini_denom_json(lo: &str, hi: &str) -> Result<String, String> {
    let parse = |s: &str| s.trim().parse::<Rational>().map_err(|e| e.to_string());
    let iv = Interval::new(parse(lo)?, parse(hi)?).map_err(|e| e.to_string())?;
    let a = mini_denom(&iv).map_err(|e| e.to_string())?;
    let a_q = Rational::from(a.clone());
    let b = (&a_q * iv.lo()).floor() + 1;
    let fraction = Rational::new(b, BigInt::from(a.clone()));
    serde_json::to_string(&Denominator { denominator: a.to_string(), fraction: fraction.to_string() })
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Mapped {
    exponents: Vec<u64>,
    degree: u64,
    collides: bool,
}

#[derive(Serialize)]
struct Explore {
    substitution: Vec<u64>,
    terms: Vec<Mapped>,
    good: bool,
    image: String,
    good_primes: Vec<u64>,
    bad_primes: Vec<u64>,
}

/// Where each monomial lands under `x_i -> x^((D+1)^(i-1) mod p)`, and which
/// of the first few odd primes are good.
pub fn kronecker_json(text: &str, degree_bound: u64, p: u64) -> Result<String, String> {
    let f = parse_poly(text).map_err(|e| e.to_string())?;
    let d = degree_bound.max(f.total_degree());
    let map = KroneckerMap::new(f.nvars(), d, p).map_err(|e| e.to_string())?;
    let degrees: Vec<u64> = f.terms().iter().map(|t| map.image_degree(&t.exponents)).collect();
    let terms = f
        .terms()
        .iter()
        .zip(&degrees)
        .map(|(t, &deg)| Mapped {
            exponents: t.exponents.clone(),
            degree: deg,
            collides: degrees.iter().filter(|&&x| x == deg).count() > 1,
        })
        .collect();
    let vectors = f.exponent_vectors();
    let (good_primes, bad_primes) = first_odd_primes(16).into_iter().partition(|&q| is_good_prime(&vectors, d, q));
    let image = map.substitute(&f).map_err(|e| e.to_string())?.to_string();
    let out = Explore {
        substitution: map.exponents().to_vec(),
        terms,
        good: is_good_prime(&vectors, d, p),
        image,
        good_primes,
        bad_primes,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn decode_trace(text: &str, magnitude: u32, denominator: u32) -> Result<String, JsError> {
    trace_json(text, magnitude.into(), denominator.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn minimal_denominator(lo: &str, hi: &str) -> Result<String, JsError> {
    mini_denom_json(lo, hi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kronecker_explore(text: &str, degree_bound: u32, p: u32) -> Result<String, JsError> {
    kronecker_json(text, degree_bound.into(), p.into()).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn trace_recovers_example() {
        let v = json(&trace_json("vars 1\n3/2 2\n-1/2 0\n", 2, 2).unwrap());
        assert_eq!(v["beta"], "9");
        assert_eq!(v["value"], "121");
        assert_eq!(v["recovered"], "3/2*x^2 - 1/2");
        let steps = v["steps"].as_array().unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0]["degree"], 2);
        assert_eq!(steps[0]["residue"], "-1/2");
        assert_eq!(steps[1]["residue"], "0");
        assert!(trace_json("vars 1\n1/3 1\n", 2, 2).is_err());
        assert!(trace_json("vars 2\n1 1 1\n", 2, 2).is_err());
    }

    #[test]
    fn mini_denom_demo() {
        let v = json(&mini_denom_json("1/3", "1/2").unwrap());
        assert_eq!(v["denominator"], "5");
        assert_eq!(v["fraction"], "2/5");
        assert!(mini_denom_json("1/2", "1/3").is_err());
        assert!(mini_denom_json("x", "1").is_err());
    }

    #[test]
    fn kronecker_demo() {
        let v = json(&kronecker_json("vars 2\n1 2 0\n1 0 1\n", 4, 3).unwrap());
        assert_eq!(v["substitution"], serde_json::json!([1, 2]));
        assert_eq!(v["good"], false);
        assert_eq!(v["image"], "2*x^2");
        assert!(v["terms"].as_array().unwrap().iter().all(|t| t["collides"] == true));
        let v = json(&kronecker_json("vars 2\n1 2 0\n1 0 1\n", 4, 5).unwrap());
        assert_eq!(v["good"], true);
        assert!(v["bad_primes"].as_array().unwrap().contains(&serde_json::json!(3)));
        assert!(kronecker_json("vars 2\n1 2 0\n", 4, 4).is_err());
    }

    #[test]
    fn long_values_are_abbreviated() {
        let s = abbreviate("7".repeat(100));
        assert!(s.contains("(100 digits)"));
        assert_eq!(abbreviate("123".to_string()), "123");
    }
}
