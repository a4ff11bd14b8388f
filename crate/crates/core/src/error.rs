use thiserror::Error;

/// Errors raised by the numerical toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// An argument fell outside the domain of a function, e.g. λ ∉ [a, b].
    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("grid oracle limited to n <= 3, got n = {0}")]
    CostGuard(usize),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
