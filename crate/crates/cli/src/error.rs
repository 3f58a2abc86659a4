use std::fmt::Display;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{0}")]
    NonCoalescence(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] rcsim_core::Error),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Display) -> Self {
        CliError::Config { path: path.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::NonCoalescence(_) => 4,
            CliError::Io(_) | CliError::Core(_) => 1,
        }
    }
}
