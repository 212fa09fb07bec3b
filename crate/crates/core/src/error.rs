use thiserror::Error;

/// Errors produced by samplers, solvers and statistical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical range exceeded: {0}")]
    NumericalRange(String),

    #[error("numerical failure: {message}{}", seed.map(|s| format!(" (seed {s})")).unwrap_or_default())]
    NumericalFailure { message: String, seed: Option<u64> },

    #[error("discretization failure: {0}")]
    Discretization(String),
}

impl Error {
    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        Error::NumericalFailure {
            message: message.into(),
            seed: None,
        }
    }

    /// Attach a sampling seed to a numerical failure so the trial can be replayed.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            Error::NumericalFailure { message, .. } => Error::NumericalFailure {
                message,
                seed: Some(seed),
            },
            other => other,
        }
    }

    /// True for failures of iterative or quadrature numerics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure { .. } | Error::NumericalRange(_) | Error::Discretization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
