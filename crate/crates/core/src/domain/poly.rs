use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, Result};

use super::Rational;

/// One nonzero term `coeff * x^degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub degree: u64,
}

impl Term {
    pub fn new(coeff: Rational, degree: u64) -> Self {
        Term { coeff, degree }
    }
}

/// Univariate sparse polynomial; degrees strictly ascending, no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: Vec<Term>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Collects terms into canonical form, summing repeated degrees.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<u64, Rational> = BTreeMap::new();
        for t in terms {
            let slot = acc.entry(t.degree).or_default();
            *slot = &*slot + &t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(degree, coeff)| Term { coeff, degree })
            .collect();
        SparsePoly { terms }
    }

    /// Convenience constructor from `(coefficient, degree)` pairs.
    pub fn from_pairs<C: Into<Rational>>(pairs: impl IntoIterator<Item = (C, u64)>) -> Self {
        Self::from_terms(pairs.into_iter().map(|(c, d)| Term::new(c.into(), d)))
    }

    /// Terms in ascending degree order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.degree)
    }

    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.terms.iter().cloned())
    }

    /// Horner's rule over the gaps between consecutive degrees.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut iter = self.terms.iter().rev();
        let Some(top) = iter.next() else {
            return Rational::zero();
        };
        let mut acc = top.coeff.clone();
        let mut prev = top.degree;
        for t in iter {
            acc = &(&acc * &x.pow(prev - t.degree)) + &t.coeff;
            prev = t.degree;
        }
        if prev > 0 {
            acc = &acc * &x.pow(prev);
        }
        acc
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            let sign = if t.coeff.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let c = t.coeff.abs();
            match (t.degree, c == Rational::one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "x")?,
                (d, true) => write!(f, "x^{d}")?,
                (1, false) => write!(f, "{c}*x")?,
                (d, false) => write!(f, "{c}*x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Multivariate term `coeff * x_1^e_1 ... x_n^e_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiTerm {
    pub coeff: Rational,
    pub exponents: Vec<u64>,
}

impl MultiTerm {
    pub fn new(coeff: Rational, exponents: Vec<u64>) -> Self {
        MultiTerm { coeff, exponents }
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

/// Graded-lexicographic order on exponent vectors.
pub fn grlex(a: &[u64], b: &[u64]) -> Ordering {
    let (da, db): (u64, u64) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Multivariate sparse polynomial; terms ascending in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<MultiTerm>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: Vec::new() }
    }

    /// Rejects repeated exponent vectors and arity mismatches; drops zero terms.
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = MultiTerm>) -> Result<Self> {
        if nvars == 0 {
            return Err(invalid("polynomial needs at least one variable"));
        }
        let mut terms: Vec<MultiTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        if let Some(t) = terms.iter().find(|t| t.exponents.len() != nvars) {
            return Err(invalid(format!(
                "term has {} exponents, expected {nvars}",
                t.exponents.len()
            )));
        }
        terms.sort_by(|a, b| grlex(&a.exponents, &b.exponents));
        if let Some(w) = terms.windows(2).find(|w| w[0].exponents == w[1].exponents) {
            return Err(invalid(format!("repeated exponent vector {:?}", w[0].exponents)));
        }
        Ok(MultiPoly { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[MultiTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(MultiTerm::total_degree).max().unwrap_or(0)
    }

    pub fn exponent_vectors(&self) -> Vec<Vec<u64>> {
        self.terms.iter().map(|t| t.exponents.clone()).collect()
    }

    pub fn from_univariate(p: &SparsePoly) -> Self {
        let terms = p.terms().iter().map(|t| MultiTerm::new(t.coeff.clone(), vec![t.degree])).collect();
        MultiPoly { nvars: 1, terms }
    }

    pub fn to_univariate(&self) -> Option<SparsePoly> {
        (self.nvars == 1).then(|| {
            SparsePoly::from_terms(self.terms.iter().map(|t| Term::new(t.coeff.clone(), t.exponents[0])))
        })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(invalid(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Rational::zero();
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for (x, &e) in point.iter().zip(&t.exponents) {
                if e > 0 {
                    m = &m * &x.pow(e);
                }
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if t.coeff.is_negative() { "-" } else { "+" })?;
            } else if t.coeff.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", t.coeff.abs())?;
            for (j, &e) in t.exponents.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", j + 1)?,
                    _ => write!(f, "*x{}^{e}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// A polynomial of either shape, for code that accepts both.
pub enum PolyRef<'a> {
    Uni(&'a SparsePoly),
    Multi(&'a MultiPoly),
}

impl<'a> From<&'a SparsePoly> for PolyRef<'a> {
    fn from(p: &'a SparsePoly) -> Self {
        PolyRef::Uni(p)
    }
}

impl<'a> From<&'a MultiPoly> for PolyRef<'a> {
    fn from(p: &'a MultiPoly) -> Self {
        PolyRef::Multi(p)
    }
}

/// Exact value of `poly` at `point`.
pub fn eval_sparse<'a>(poly: impl Into<PolyRef<'a>>, point: &[Rational]) -> Result<Rational> {
    match poly.into() {
        PolyRef::Uni(p) => match point {
            [x] => Ok(p.eval(x)),
            _ => Err(invalid(format!("univariate polynomial evaluated at {} coordinates", point.len()))),
        },
        PolyRef::Multi(p) => p.eval(point),
    }
}
