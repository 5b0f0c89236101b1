//! Command line front end: argument parsing, experiment dispatch and reports.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod validate;

pub use config::{Cli, Command, ExperimentConfig, Format};
pub use error::CliError;
pub use report::{Metric, Report};
pub use run::execute;
