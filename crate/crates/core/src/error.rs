use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// `StructuralFailure` means the mathematics answered "no" (the input is not
/// what the caller claimed); `ResourceLimit` means the search gave up.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid corner: {0}")]
    InvalidCorner(String),

    #[error("resource limit exceeded in {what}: budget {budget}{}", dim.map(|d| format!(", reached dimension {d}")).unwrap_or_default())]
    ResourceLimit {
        what: String,
        budget: u64,
        dim: Option<usize>,
    },

    #[error("structural failure: {what}")]
    StructuralFailure { what: String, witness: Vec<usize> },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("search exhausted without result: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn structural(what: impl Into<String>, witness: Vec<usize>) -> Self {
        Error::StructuralFailure {
            what: what.into(),
            witness,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
