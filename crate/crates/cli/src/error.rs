use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments or inputs; exit status 2.
    #[error("{0}")]
    Usage(String),

    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },

    #[error("{}:{source}", path.display())]
    Asm {
        path: PathBuf,
        source: lamp_asm::AsmError,
    },

    #[error(transparent)]
    Core(#[from] lamp_core::Error),

    #[error(transparent)]
    Sim(#[from] lamp_sim::SimError),

    /// The command ran but did not succeed, e.g. a deadlocked simulation.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn input(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Input {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
