use std::path::PathBuf;

/// Errors produced by the library and the command-line harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid range: lo ({lo}) must be strictly below hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("invalid set count {0}: a partition needs at least 2 sets")]
    InvalidCount(usize),

    #[error("invalid width factor {0}: must be positive and finite")]
    InvalidFactor(f64),

    /// Every rule active at the query point is empty (a coverage gap).
    #[error("no active rule at the query point")]
    NoActiveRule,

    #[error("model shapes differ: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("model input domains differ")]
    DomainMismatch,

    #[error("expected {expected} input dimensions, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("{algorithm} requires {required} membership functions")]
    WrongPartitionKind {
        algorithm: &'static str,
        required: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
