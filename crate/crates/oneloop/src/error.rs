use oneloop_core::enumerate::EnumerateError;
use oneloop_core::quotient::QuotientError;
use thiserror::Error;

use crate::csi::CsiError;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE_LIMIT: i32 = 3;
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("graph count exceeded the ceiling {limit}")]
    ResourceLimit { limit: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csi(#[from] CsiError),
    #[error("{0}")]
    Computation(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Input(_) | AppError::Io { .. } | AppError::Csi(_) => exit::USAGE,
            AppError::ResourceLimit { .. } => exit::RESOURCE_LIMIT,
            AppError::Computation(_) => exit::VERIFICATION_FAILED,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }
}

impl From<QuotientError> for AppError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::ResourceLimit { limit } => AppError::ResourceLimit { limit },
            QuotientError::UnknownKey(_) => AppError::Input(e.to_string()),
            other => AppError::Computation(other.to_string()),
        }
    }
}

impl From<EnumerateError> for AppError {
    fn from(e: EnumerateError) -> Self {
        QuotientError::from(e).into()
    }
}
