//! Experiment harness around `moseed-core`: configuration, repetitions,
//! reference-front caching, file formats and reports.

pub mod config;
pub mod error;
pub mod formats;
pub mod front;
pub mod harness;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use harness::{run_experiment, Experiment, RunRecord};
