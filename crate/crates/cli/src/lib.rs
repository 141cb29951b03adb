//! Command-line driver: configuration, command execution and file emission.

pub mod args;
pub mod config;
pub mod error;
pub mod run;

pub use args::Cli;
pub use config::{Command, Format, OmegaSpec, OperatorName, RunConfig};
pub use error::CliError;
pub use run::{render, run, Artifact, Manifest, RunSummary};
