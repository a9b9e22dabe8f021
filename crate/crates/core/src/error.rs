use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Encoding { path: PathBuf, offset: u64 },

    #[error("{path}:{line}: {message}")]
    Format { path: PathBuf, line: u64, message: String },

    #[error("paired files differ in length: {shorter} ends after {lines} lines but {longer} continues")]
    LengthMismatch {
        shorter: PathBuf,
        longer: PathBuf,
        lines: u64,
    },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vocabulary fingerprint mismatch: model expects {expected}, vocabulary is {actual}")]
    FingerprintMismatch { expected: String, actual: String },

    #[error("feature index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors that stem from inconsistent inputs or settings rather
    /// than from a failure while running a stage.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::FingerprintMismatch { .. })
    }
}
