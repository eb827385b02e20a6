//! File formats, rendering and the command-line frontend for `hamhier-core`.

pub mod cli;
pub mod render;
pub mod schema;

pub use cli::{run, ExitStatus};

/// Failures surfaced by the frontend, each mapped to its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid options: {0}")]
    Options(String),
    #[error("cannot read {0}")]
    MissingFile(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hamhier_core::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        use hamhier_core::Error as E;
        match self {
            CliError::Options(_) => ExitStatus::BadOptions,
            CliError::MissingFile(_) => ExitStatus::MissingFile,
            CliError::Input(_) | CliError::Core(E::Parse(_)) => ExitStatus::BadInput,
            CliError::Core(E::MissingEntry(_)) => ExitStatus::TableMiss,
            CliError::Core(_) => ExitStatus::ComputeError,
        }
    }
}
