//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("user index {0} out of range (graph has {1} users)")]
    UserOutOfRange(u32, usize),

    #[error("{0}")]
    InvalidInput(String),

    #[error("empty connection set: caller must skip users without comparable connections")]
    EmptyConnections,

    #[error("expected magnitude must lie strictly between 0 and 1, got {0}")]
    DegenerateExpected(f64),

    #[error("infeasible degree sequence: {0}")]
    InfeasibleDegrees(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("unknown feature group `{0}`")]
    UnknownFeatureGroup(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }
}
