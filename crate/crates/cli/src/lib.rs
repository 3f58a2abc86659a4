//! Experiment driver behind the `rcsim` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod validate;

pub use config::{parse_config, Command, ExperimentConfig};
pub use error::CliError;
