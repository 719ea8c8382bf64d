use std::path::PathBuf;

use thiserror::Error;

use crate::units::Unit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot convert {from} to {to}: different dimensions")]
    DimensionMismatch { from: Unit, to: Unit },

    #[error("unknown fuel `{0}`")]
    UnknownFuel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: missing keys: {}", keys.join(", "))]
    MissingKeys { path: PathBuf, keys: Vec<String> },

    #[error("{path}: digest mismatch (expected {expected}, found {found})")]
    DigestMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors raised by the LP engine rather than by bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::Solver(_))
    }
}
