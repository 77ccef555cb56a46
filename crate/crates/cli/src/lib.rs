//! Experiment harness around `opuc-core`: JSON-configured scenarios,
//! deterministic CSV tables and JSON summaries.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod scenarios;

pub use config::{parse, ExperimentConfig, Scenario};
pub use error::{CliError, CliResult};
pub use report::{Gate, RunReport, Table};
