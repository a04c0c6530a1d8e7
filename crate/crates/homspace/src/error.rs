use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit code for a failed mandatory check or a numerical failure.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for unreadable, malformed or schema-violating input.
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("schema: {0}")]
    Schema(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// Numerical failure after the input was accepted.
    #[error("{0}")]
    Numeric(#[from] homspace_core::Error),

    /// Mandatory checks failed and `--force` was not given.
    #[error("space failed {0} mandatory check(s); rerun `check` for details or pass --force")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Schema(_) | Self::Usage(_) | Self::Io { .. } => EXIT_BAD_INPUT,
            Self::Numeric(_) | Self::ChecksFailed(_) => EXIT_CHECK_FAILED,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
