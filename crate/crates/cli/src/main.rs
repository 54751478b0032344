use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hhi_forge_cli::{configure_threads, run, Check, CliError, ExperimentConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    ValidateModel,
    SpectralProjectors,
    CylinderProjectors,
    CompareCalderon,
    StatesCheck,
    Hhi,
    DivergenceCheck,
    /// Every check listed in `run.checks`.
    All,
}

/// Spectral and elliptic constructions of thermal and HHI covariances.
#[derive(Debug, Parser)]
#[command(name = "hhi-forge", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `run.out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Abort when the model violates the standing hypotheses.
    #[arg(long)]
    strict: bool,
}

fn fail(error: &CliError) -> ExitCode {
    eprintln!("error: {error}");
    ExitCode::from(error.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e),
    };
    let checks = match args.command {
        Command::All => cfg.run.checks.clone(),
        Command::ValidateModel => vec![Check::ValidateModel],
        Command::SpectralProjectors => vec![Check::SpectralProjectors],
        Command::CylinderProjectors => vec![Check::CylinderProjectors],
        Command::CompareCalderon => vec![Check::CompareCalderon],
        Command::StatesCheck => vec![Check::StatesCheck],
        Command::Hhi => vec![Check::Hhi],
        Command::DivergenceCheck => vec![Check::DivergenceCheck],
    };
    if checks.contains(&Check::Hhi) && !cfg.is_hawking() {
        return fail(&CliError::ConfigInvalid {
            path: args.config.display().to_string(),
            field: "thermal.beta".into(),
            message: "disk runs need beta = \"hawking\"".into(),
        });
    }
    let out = args.out.unwrap_or_else(|| cfg.run.out.clone());
    match run(&checks, &cfg, &out, args.strict) {
        Ok(report) => {
            print!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(aborted) => {
            print!("{}", aborted.partial);
            fail(&aborted.error)
        }
    }
}
