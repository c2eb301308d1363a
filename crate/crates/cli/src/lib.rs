//! Command-line front end for the `pencilrange` library.

pub mod commands;
pub mod io;
pub mod report;

use std::process::ExitCode;

use thiserror::Error;

pub use commands::{run, Cli};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Library(#[from] pencilrange::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Process exit codes.
pub mod exit {
    pub const ANALYZED: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
    pub const INDETERMINATE: u8 = 3;
    pub const RECOVERY_FAILED: u8 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use pencilrange::Error as E;
        let code = match self {
            CliError::Io(_) | CliError::Input(_) => exit::INPUT_ERROR,
            CliError::Verification(_) => exit::VERIFICATION_FAILED,
            CliError::Library(e) => match e {
                E::InvalidInput(_) | E::DimensionMismatch { .. } | E::NotSemidefinite { .. } | E::NotDissipative { .. } => {
                    exit::INPUT_ERROR
                }
                E::FailedRecovery { .. } => exit::RECOVERY_FAILED,
                _ => exit::INDETERMINATE,
            },
        };
        ExitCode::from(code)
    }
}
