use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Bernoulli polynomial degree {degree} is not tabulated (max {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    /// Cholesky factorization hit a pivot at or below the positive-definiteness
    /// tolerance.
    #[error(
        "scatter matrix is singular or not positive definite (pivot {pivot:e} at index {index}, \
         tolerance {tolerance:e}); the statistic requires n > p + 1 and non-degenerate data"
    )]
    Singular {
        index: usize,
        pivot: f64,
        tolerance: f64,
    },

    #[error("block sizes sum to {sum}, but the matrix has dimension {dim}")]
    Partition { sum: usize, dim: usize },

    /// Layout does not satisfy the existence conditions of the test, or does
    /// not match the data supplied.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The Bartlett factor is not positive for this layout.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
