use std::path::{Path, PathBuf};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    Dimension {
        context: String,
        left: String,
        right: String,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Shape mismatch at `context`, reporting both offending shapes.
    pub fn dimension(context: impl Into<String>, left: &[usize], right: &[usize]) -> Self {
        Error::Dimension {
            context: context.into(),
            left: format!("{left:?}"),
            right: format!("{right:?}"),
        }
    }

    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
