use thiserror::Error;

/// Errors raised by state construction, the protocol and the concurrence routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "truncation infeasible: tail mass {tail:e} at cap n = {cap} exceeds epsilon {epsilon:e}"
    )]
    Capacity { tail: f64, epsilon: f64, cap: usize },

    #[error("state must be normalized, squared norm is {0}")]
    NotNormalized(f64),

    #[error("degenerate concurrence denominator: {0}")]
    Degenerate(String),

    #[error("concurrence {0} lies outside [0, 1]")]
    OutOfRange(f64),

    #[error("zero-probability outcome: {0}")]
    ZeroProbability(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
