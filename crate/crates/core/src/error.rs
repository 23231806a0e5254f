use thiserror::Error;

/// Errors raised by every module of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input lies outside the domain of the requested operation.
    #[error("domain error in `{param}`: {reason}")]
    Domain { param: String, reason: String },

    /// A value violates the invariants of its type.
    #[error("validation error: {0}")]
    Validation(String),

    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// The requested case is not covered by the available data.
    #[error("unsupported case: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn domain(param: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain {
            param: param.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::Validation(_) | Error::Unsupported(_) => 2,
            Error::InternalConsistency(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
