use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Result};

use super::{MultiPoly, Rational, SparsePoly};

/// Exact evaluation of an unknown polynomial, one counted probe per call.
///
/// Implementations must be deterministic; the probe counter is the only
/// mutable state and is updated atomically.
pub trait BlackBox: Sync {
    fn arity(&self) -> usize;

    fn probe(&self, point: &[Rational]) -> Result<Rational>;

    /// Number of completed `probe` calls.
    fn probes(&self) -> u64;

    fn probe_at(&self, x: &Rational) -> Result<Rational> {
        self.probe(std::slice::from_ref(x))
    }
}

/// Something that can be evaluated exactly; the uncounted side of a box.
pub trait Evaluate: Sync {
    fn arity(&self) -> usize;
    fn evaluate(&self, point: &[Rational]) -> Result<Rational>;
}

impl Evaluate for SparsePoly {
    fn arity(&self) -> usize {
        1
    }

    fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        super::eval_sparse(self, point)
    }
}

impl Evaluate for MultiPoly {
    fn arity(&self) -> usize {
        self.nvars()
    }

    fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.eval(point)
    }
}

/// Hides a known polynomial behind the black-box interface.
pub struct PolyBox<P> {
    poly: P,
    probes: AtomicU64,
}

impl<P: Evaluate> PolyBox<P> {
    pub fn new(poly: P) -> Self {
        PolyBox { poly, probes: AtomicU64::new(0) }
    }

    pub fn inner(&self) -> &P {
        &self.poly
    }
}

impl<P: Evaluate> BlackBox for PolyBox<P> {
    fn arity(&self) -> usize {
        self.poly.arity()
    }

    fn probe(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.poly.arity() {
            return Err(invalid(format!("expected {} coordinates, got {}", self.poly.arity(), point.len())));
        }
        let v = self.poly.evaluate(point)?;
        self.probes.fetch_add(1, Ordering::Relaxed);
        Ok(v)
    }

    fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }
}

/// A black box backed by a closure.
pub struct FnBox<F> {
    arity: usize,
    f: F,
    probes: AtomicU64,
}

impl<F> FnBox<F>
where
    F: Fn(&[Rational]) -> Rational + Sync,
{
    pub fn new(arity: usize, f: F) -> Self {
        FnBox { arity, f, probes: AtomicU64::new(0) }
    }
}

impl<F> BlackBox for FnBox<F>
where
    F: Fn(&[Rational]) -> Rational + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }

    fn probe(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(invalid(format!("expected {} coordinates, got {}", self.arity, point.len())));
        }
        self.probes.fetch_add(1, Ordering::Relaxed);
        Ok((self.f)(point))
    }

    fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }
}
