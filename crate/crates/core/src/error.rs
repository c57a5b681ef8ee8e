use thiserror::Error;

/// Errors raised by the arithmetic, analytic and solver layers.
///
/// The variants map one-to-one onto the CLI exit codes: `Domain` is 1,
/// `Usage` and `Parse` are 2, `Internal` is 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the set where the operation is defined
    /// (out-of-ball series argument, division by zero, parameter with
    /// valuation below one).
    #[error("domain error: {0}")]
    Domain(String),
    /// The caller combined values or flags in a way the API does not allow.
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// A self-check failed. Seeing this means a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
