use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("duplicate article id {id:?} (lines {first_line} and {line})")]
    DuplicateId {
        id: String,
        first_line: u64,
        line: u64,
    },

    #[error("missing required column {0:?} in header")]
    MissingColumn(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("graph has cycles through {} node(s)", .nodes.len())]
    Cyclic { nodes: Vec<u32> },

    #[error("graph has {n} nodes, dense oracle is limited to {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("subjects missing from cluster map: {}", .0.join(", "))]
    UnmappedSubjects(Vec<String>),

    #[error("no valid sweep cell to select from")]
    NoValidCell,

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
