use thiserror::Error;

/// Errors produced anywhere in the inference stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("probability {0} is outside the open unit interval")]
    ProbabilityOutOfRange(f64),

    #[error("contour is identically zero on the evaluation grid")]
    ZeroContour,

    #[error("total conflict between prior and data ({0})")]
    Conflict(String),

    #[error("degenerate generator: h is constant over the Monte Carlo batch")]
    DegenerateGenerator,

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (conflict, zero normalizer) as
    /// opposed to malformed configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroContour | Error::Conflict(_) | Error::DegenerateGenerator
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
