use thiserror::Error;

/// Errors produced by state construction, channel evaluation and the
/// decomposition solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, non-normalized state, matrix that
    /// fails the density-operator checks, unparseable exchange data.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Structurally valid input outside the regime where the requested
    /// quantity is defined (e.g. a separable ensemble of an entangled state).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// An iteration failed to reach its tolerance; the message carries the
    /// residual actually achieved.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
