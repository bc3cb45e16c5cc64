//! Scenario runner behind the `qscale` binary.
//!
//! A [`ScenarioConfig`] names a scenario, overrides some of its default
//! parameters and picks a time scaling. [`run`] validates it, integrates the
//! protocol and returns a [`SummaryRecord`] together with CSV series.

pub mod config;
pub mod defaults;
pub mod runner;

use std::fmt;

pub use config::{schema, ConfigError, Scenario, ScalingKind, ScalingOptions, ScenarioConfig};
pub use defaults::{defaults_for, defaults_table, DEFAULTS_VERSION};
pub use runner::{compare, compare_csv, run, write_outputs, CompareRow, Provenance, RunOutput, SummaryRecord};

/// Environment variable that overrides the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "QSCALE_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// The config violates the schema.
    Config(ConfigError),
    /// Invalid command-line usage.
    Usage(String),
    /// A numerical module failed.
    Numerical(crate::Error),
    Io(std::io::Error),
}

impl CliError {
    /// `2` for schema and usage errors, `3` for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "invalid config: {e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
