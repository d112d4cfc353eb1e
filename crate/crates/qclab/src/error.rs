use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("computation failed at {0}: {1}")]
    Math(u64, qclab_core::Error),
    #[error("identity check failed")]
    Identity,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Identity | CliError::Math(..) => 1,
            CliError::Io(_) => 2,
            CliError::Input(_) => 3,
        }
    }

    pub fn from_csv(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}
