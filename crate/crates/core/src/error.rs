use thiserror::Error;

/// Errors raised by the library. Each variant maps to a stable code in the C ABI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resolution did not terminate by length {0}")]
    ResolutionTruncated(usize),
    #[error("forced degree {needed} exceeds degree cap {cap}")]
    DegreeCapExceeded { needed: u32, cap: u32 },
    #[error("cannot sample: {0}")]
    CannotSample(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("instance check failed: {0}")]
    InstanceCheckFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable kind, used in structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Semantic(_) => "semantic",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidInput(_) => "invalid_input",
            Error::ResolutionTruncated(_) => "resolution_truncated",
            Error::DegreeCapExceeded { .. } => "degree_cap_exceeded",
            Error::CannotSample(_) => "cannot_sample",
            Error::NotApplicable(_) => "not_applicable",
            Error::InstanceCheckFailed(_) => "instance_check_failed",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
