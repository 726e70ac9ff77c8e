use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A record could not be parsed. `line` is 1-based.
    #[error("{source_name}:{line}: parse error: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    /// A parsed value broke a declared constraint.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty text")]
    EmptyText,

    #[error("zero variance")]
    ZeroVariance,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid training data: {0}")]
    InvalidTrainingData(String),

    #[error("artifact format version mismatch: file has {found}, this build reads {expected}")]
    VersionMismatch { expected: String, found: String },

    #[error("feature schema mismatch: artifact {artifact}, current {current}")]
    SchemaMismatch { artifact: String, current: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("condition `{condition}` failed: {source}")]
    Condition {
        condition: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(source_name: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }
}
