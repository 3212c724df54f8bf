//! Experiment harness: named suites over random populations of commuting
//! contraction pairs, aggregated into `report.json` and `trials.csv`.

mod config;
mod report;
pub mod suites;

pub use config::{ConfigOverlay, Exponent, SuiteConfig, DEFAULT_SEED};
pub use report::{read_trials_csv, CheckSummary, Record, Report, SuiteReport, CSV_COLUMNS, SCHEMA_VERSION};
pub use suites::{replay, run_suite, suite_names, trial_seed, Measure, FLOOR, REGISTRY};

use crate::error::Result;

/// Pseudo-suite name that runs every registered suite.
pub const ALL: &str = "all";

/// Resolves `suite` (or every suite for [`ALL`]) against `overlay`, applies
/// the command-line overrides, and runs it.
pub fn run_named(suite: &str, overlay: &ConfigOverlay, seed: Option<u64>, trials: Option<usize>) -> Result<Report> {
    let names: Vec<&str> = if suite == ALL { suite_names() } else { vec![suite] };
    let mut overlay = overlay.clone();
    overlay.seed = seed.or(overlay.seed);
    overlay.trials = trials.or(overlay.trials);
    // Validate everything before spending time on any suite.
    let configs = names.iter().map(|n| overlay.resolve(n)).collect::<Result<Vec<_>>>()?;
    let reports = configs.iter().map(run_suite).collect::<Result<Vec<_>>>()?;
    Ok(Report::new(reports))
}
