use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bound or formula was requested for an index outside its eligible range.
    #[error("k = {k} is outside the eligible range 1..={k_max} ({which})")]
    Range {
        k: usize,
        k_max: usize,
        which: &'static str,
    },

    /// An iterative or adaptive numeric procedure did not meet its tolerance.
    #[error("{what} did not converge: achieved error estimate {achieved:e}")]
    Convergence { what: String, achieved: f64 },

    /// A numeric result failed its own residual check.
    #[error("numeric failure in {what}: residual {residual:e}")]
    Numeric { what: String, residual: f64 },

    /// A malformed input file or string.
    #[error("parse error{}: {message}", .path.as_ref().map(|p| format!(" in {}", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
