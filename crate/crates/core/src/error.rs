use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("memristor state must be a finite non-negative value, got {0}")]
    InvalidState(f64),

    #[error("step size must be a finite positive value, got {0}")]
    NonPositiveStep(f64),

    #[error("invalid conductance curve: {0}")]
    InvalidCurve(String),

    #[error("symbol index {index} is outside an alphabet of {size} symbols")]
    UnknownSymbol { index: usize, size: usize },

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("corpus contains no melodies")]
    EmptyCorpus,

    #[error("melody `{name}` is not normalized: {detail}")]
    NotNormalized { name: String, detail: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
