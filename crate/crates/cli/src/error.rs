use std::path::Path;

use distro_eval_core::{StatsError, SweepError};
use thiserror::Error;

/// A command failure, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad usage, configuration or I/O. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The inputs were readable but the data cannot support the request.
    /// Exit code 1.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }

    pub(crate) fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Usage(format!("{}: {err}", path.display()))
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
