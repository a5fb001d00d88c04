use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses, following the BSD `sysexits` numbering.
pub mod exit {
    pub const CHISQ_OK: i32 = 0;
    pub const BARTLETT_OK: i32 = 1;
    pub const NEITHER: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
    pub const INTERNAL: i32 = 70;
    pub const IO: i32 = 74;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or layout.
    #[error("{0}")]
    Usage(String),

    /// Input data that cannot be parsed or analysed.
    #[error("{0}")]
    Data(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Data(_) => exit::DATA,
            CliError::Io { .. } => exit::IO,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn usage(e: lrt_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub(crate) fn data(e: lrt_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
