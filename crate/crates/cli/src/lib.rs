//! Scenario runner behind the `geophase` binary: parse a declarative JSON
//! config, run gate syntheses, sweeps and convergence studies, and write a
//! JSON report plus one CSV per tabular scenario.

pub mod config;
pub mod metrics;
pub mod report;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::{parse, Config, ConfigError};
pub use report::{exit_code, EXIT_CONFIG, EXIT_OK, EXIT_SCENARIO, EXIT_THRESHOLD};
pub use run::{execute, ScenarioOutcome, Status};

/// Runs a parsed config and writes the reports into `out_dir`.
///
/// Returns the process exit code and the path of `report.json`. Only I/O
/// and thread-pool failures are errors here; scenario failures are encoded
/// in the exit code and the report.
pub fn run_config(
    config: &Config,
    out_dir: &Path,
    workers: Option<usize>,
    fail_fast: bool,
) -> std::io::Result<(u8, PathBuf)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers.or(config.workers) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(std::io::Error::other)?;
    let outcomes = pool.install(|| execute(config, fail_fast));
    let code = exit_code(&outcomes);
    let path = report::emit(out_dir, config, &outcomes, code)?;
    Ok((code, path))
}
