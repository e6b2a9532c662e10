//! Experiment driver for `cavitylab`: configuration, sweeps over
//! wavenumbers and CSV output.

pub mod checkpoint;
pub mod config;
pub mod experiments;
pub mod run;
pub mod synthetic;
pub mod table;

pub use config::ExperimentConfig;
pub use experiments::{run, CliError, Command, Report, RunOptions};
