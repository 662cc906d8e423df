use thiserror::Error;

/// Errors raised by the interpolation routines.
///
/// Bad-prime rejections in the multivariate drivers are not errors; they are
/// reported as [`Outcome::Failure`](crate::Outcome::Failure).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value has no leading term (residue is zero)")]
    NoTerm,
    #[error("value lies outside the coefficient domain: {0}")]
    NotInDomain(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
