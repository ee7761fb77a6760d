//! Command-line experiment runner for `zkamp`.
//!
//! Each subcommand builds instances, runs one verification suite and emits a
//! JSON [`report::Report`]. Exit code 0 means every record passed, 1 means
//! some check failed and 2 a configuration error.

pub mod commands;
pub mod config;
pub mod report;

use std::time::Instant;

use config::RunConfig;
use report::{Dims, Environment, Float, Report, Timings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] zkamp::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut records = commands::global_records(cfg)?;
    let trials = commands::run_trials(cfg)?;
    let trial_seconds = trials.iter().map(|(_, s)| Float(*s)).collect();
    records.extend(trials.into_iter().flat_map(|(r, _)| r));
    let environment = Environment {
        seed: cfg.seed,
        n: cfg.n,
        m: cfg.m,
        trials: cfg.trials,
        dims: Dims {
            w: cfg.dims.w,
            v: cfg.dims.v,
        },
        timings: Timings {
            total_seconds: Float(start.elapsed().as_secs_f64()),
            trial_seconds,
        },
    };
    Ok(Report::new(cfg.command.name(), records, environment))
}
