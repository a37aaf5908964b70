//! Command-line front end and CSV persistence for the spherical sampling
//! toolkit: lattice generation, spiral tracing, cap-set area estimation,
//! benchmark sweeps and scaling-law fits.

pub mod commands;
pub mod format;
pub mod tables;

use thiserror::Error;

/// CLI failure classified by exit code: usage errors exit 2, input-data and
/// I/O errors exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    pub fn usage(message: impl std::fmt::Display) -> Self {
        CliError::Usage(message.to_string())
    }

    pub fn data(message: impl std::fmt::Display) -> Self {
        CliError::Data(message.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
