//! Driver for the conclab verification suites: configuration, sweeps,
//! report aggregation and instance generation.

pub mod config;
pub mod generate;
pub mod summary;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{Format, Overrides, RunConfig, Target};
pub use generate::{generate, GenerateParams, InstanceKind};
pub use summary::{execute, render, RunSummary, SuiteSummary, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] conclab::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

/// Exit status of a finished run: 0 when every report passed, 1 otherwise.
pub fn exit_code(summary: &RunSummary) -> u8 {
    u8::from(summary.failures > 0)
}
