use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A checked integer operation exceeded the range of `u64`.
    #[error("integer overflow")]
    Overflow,

    /// An iterative method did not reach its stopping criterion.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// The caller supplied a value that does not satisfy a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A root bracket did not contain a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
