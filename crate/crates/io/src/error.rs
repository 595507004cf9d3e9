//! Error type for file formats and the CLI, with process exit codes.

use miqodd_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("i/o error on {path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, IoError>;

impl IoError {
    pub fn file(path: impl Into<String>, source: std::io::Error) -> Self {
        Self::File { path: path.into(), source }
    }

    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse { path: path.into(), message: message.into() }
    }

    /// Process exit code: 2 input, 3 numerical, 4 resource budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) => match e {
                CoreError::NotPositiveDefinite { .. }
                | CoreError::SingularSubmatrix { .. }
                | CoreError::PowerIterationDiverged { .. } => 3,
                CoreError::ArcBudgetExceeded { .. }
                | CoreError::PathCapExceeded { .. }
                | CoreError::OracleCapExceeded { .. } => 4,
                _ => 2,
            },
            _ => 2,
        }
    }
}
