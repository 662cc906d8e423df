//! Line-oriented polynomial files.
//!
//! ```text
//! # comment
//! vars 2
//! 1 1 1
//! -1/1 0 2
//! ```
//!
//! The header `vars <n>` comes first; each following line holds a coefficient
//! (`num` or `num/den`) and `n` exponents.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::{MultiPoly, MultiTerm, Rational};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let mut nvars: Option<usize> = None;
    let mut terms: Vec<(usize, MultiTerm)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let Some(n) = nvars else {
            if fields.next() != Some("vars") {
                return Err(parse_err(lineno, "expected header `vars <n>`"));
            }
            let n = fields
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| parse_err(lineno, "`vars` needs a positive integer"))?;
            if fields.next().is_some() {
                return Err(parse_err(lineno, "trailing input after `vars <n>`"));
            }
            nvars = Some(n);
            continue;
        };
        let coeff: Rational = fields
            .next()
            .expect("nonempty line")
            .parse()
            .map_err(|e: Error| parse_err(lineno, e.to_string()))?;
        let exponents = fields
            .map(|f| f.parse::<u64>().map_err(|_| parse_err(lineno, format!("bad exponent {f:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if exponents.len() != n {
            return Err(parse_err(lineno, format!("expected {n} exponents, found {}", exponents.len())));
        }
        if let Some((prev, _)) = terms.iter().find(|(_, t)| t.exponents == exponents) {
            return Err(parse_err(lineno, format!("exponent vector repeats line {prev}")));
        }
        terms.push((lineno, MultiTerm::new(coeff, exponents)));
    }
    let n = nvars.ok_or_else(|| parse_err(0, "missing `vars <n>` header"))?;
    MultiPoly::new(n, terms.into_iter().map(|(_, t)| t))
}

/// One line per term, `num/den e1 ... en`; `0` for the zero polynomial.
pub fn format_terms(poly: &MultiPoly) -> String {
    let mut out = String::new();
    if poly.is_empty() {
        out.push_str("0\n");
        return out;
    }
    for t in poly.terms() {
        write!(out, "{}/{}", t.coeff.numer(), t.coeff.denom()).unwrap();
        for e in &t.exponents {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Full file form, readable by [`parse_poly`].
pub fn print_poly(poly: &MultiPoly) -> String {
    let mut out = format!("vars {}\n", poly.nvars());
    if !poly.is_empty() {
        out.push_str(&format_terms(poly));
    }
    out
}
