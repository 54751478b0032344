//! Experiment runner: reads a TOML config, executes the requested checks and
//! writes one CSV file per table into the output directory.

pub mod checks;
pub mod config;
pub mod error;
pub mod report;

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{Check, ExperimentConfig};
pub use error::CliError;
pub use report::{Bound, CheckOutcome, Record, RunReport, Table};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HHI_FORGE_THREADS";

/// Installs the global thread pool, sized by [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::ConfigInvalid {
        path: THREADS_ENV.to_string(),
        field: THREADS_ENV.to_string(),
        message: format!("expected a positive integer, got {value:?}"),
    })?;
    // a pool installed earlier in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs one check. Its random stream depends only on the seed and the check.
pub fn run_check(check: Check, cfg: &ExperimentConfig, strict: bool) -> Result<CheckOutcome, CliError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.run.seed);
    rng.set_stream(check.stream());
    let result = match check {
        Check::ValidateModel => checks::validate_model(cfg, strict),
        Check::SpectralProjectors => checks::spectral_projectors(cfg, &mut rng),
        Check::CylinderProjectors => checks::cylinder_projectors(cfg),
        Check::CompareCalderon => checks::compare_calderon_study(cfg),
        Check::StatesCheck => checks::states_check(cfg, &mut rng),
        Check::Hhi => checks::hhi(cfg),
        Check::DivergenceCheck => checks::divergence_check(cfg, &mut rng),
    };
    let (records, tables) = result.map_err(|source| CliError::Compute { check: check.name(), source })?;
    Ok(CheckOutcome { check, records, tables, elapsed: start.elapsed() })
}

/// A run stopped by an error, with the checks completed before it.
#[derive(Debug)]
pub struct Aborted {
    pub partial: RunReport,
    pub error: CliError,
}

/// Runs `checks` in order and writes their tables to `out`.
pub fn run(checks: &[Check], cfg: &ExperimentConfig, out: &Path, strict: bool) -> Result<RunReport, Aborted> {
    let mut report = RunReport::default();
    if let Err(e) = std::fs::create_dir_all(out) {
        return Err(Aborted { partial: report, error: CliError::Io(out.to_path_buf(), e) });
    }
    for &check in checks {
        let written = run_check(check, cfg, strict).and_then(|outcome| {
            outcome.record_table().write(out)?;
            for table in &outcome.tables {
                table.write(out)?;
            }
            Ok(outcome)
        });
        match written {
            Ok(outcome) => report.outcomes.push(outcome),
            Err(error) => return Err(Aborted { partial: report, error }),
        }
    }
    Ok(report)
}
