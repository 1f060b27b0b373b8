//! Front end of the planner: loading inputs, running the planner, the
//! simulator and the benchmark studies, and writing TSV reports and SVG figures.
//!
//! Every report file is a pure function of the inputs and the seed. Wall-clock
//! measurements go to a separate `timing.tsv` so reports can be compared byte
//! for byte across runs.

pub mod bench;
pub mod commands;
pub mod input;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use kbga::environment::{EnvError, EnvErrorKind};
use kbga::ga::ConfigError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Env { path: String, source: EnvError },
    #[error("{0}")]
    EnvKind(#[from] EnvErrorKind),
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
}

pub use bench::{BenchConfig, BenchReport, BenchRow, RunRow};
pub use commands::{bench, export, plan, simulate, BenchOptions, PlanOptions, PlanOutcome, SimOptions, SimOutcome};
pub use input::{GaFlags, Input};
