use std::fmt;

/// Why an interpolation attempt was rejected.
///
/// These are the signals that a Kronecker prime collided monomials: the image
/// polynomial left the coefficient domain, or the diversified decode did not
/// factor cleanly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Failure {
    /// Decoded coefficient has magnitude above `C`.
    CoefficientTooLarge,
    /// Decoded coefficient needs a denominator above `H`.
    DenominatorTooLarge,
    /// More than `T` terms were peeled.
    TooManyTerms,
    /// Residue is nonzero but smaller than the separation allows.
    ResidueBelowSeparation,
    /// Image degree exceeds `D(p - 1)`.
    DegreeAboveBound,
    /// `b` is not a multiple of the image numerator.
    NotDivisible,
    /// Cofactor left after dividing out every diversification prime.
    Cofactor,
    /// Recovered exponents sum past `D`.
    ExponentSumAboveBound,
    /// Two decoded terms share one exponent vector.
    RepeatedMonomial,
    /// Rounding value sits exactly on a window boundary.
    WindowBoundary,
    /// Residue not exhausted after the last term.
    NonzeroResidue,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Failure::CoefficientTooLarge => "coefficient exceeds the magnitude bound",
            Failure::DenominatorTooLarge => "coefficient denominator exceeds the bound",
            Failure::TooManyTerms => "more terms than the term bound",
            Failure::ResidueBelowSeparation => "residue below the separation threshold",
            Failure::DegreeAboveBound => "image degree above D(p-1)",
            Failure::NotDivisible => "diversified coefficient not divisible by the image numerator",
            Failure::Cofactor => "diversified coefficient has a cofactor outside the chosen primes",
            Failure::ExponentSumAboveBound => "recovered exponents exceed the degree bound",
            Failure::RepeatedMonomial => "recovered exponent vectors repeat",
            Failure::WindowBoundary => "rounding value on a window boundary",
            Failure::NonzeroResidue => "residue left after the last term",
        };
        f.write_str(s)
    }
}

/// Result of an attempt that may legitimately fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Success(T),
    Failure(Failure),
}

impl<T> Outcome<T> {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success(_))
    }

    pub fn is_failure(&self) -> bool {
        !self.is_success()
    }

    pub fn success(self) -> Option<T> {
        match self {
            Outcome::Success(v) => Some(v),
            Outcome::Failure(_) => None,
        }
    }

    pub fn failure(&self) -> Option<Failure> {
        match self {
            Outcome::Success(_) => None,
            Outcome::Failure(f) => Some(*f),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Success(v) => Outcome::Success(f(v)),
            Outcome::Failure(e) => Outcome::Failure(e),
        }
    }

    /// Panics on failure.
    pub fn unwrap(self) -> T {
        match self {
            Outcome::Success(v) => v,
            Outcome::Failure(e) => panic!("called `Outcome::unwrap` on a failure: {e}"),
        }
    }
}
