use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::ExperimentConfig;
use error::{CliError, Result};
use output::Sink;

/// Spectra, Green-function asymptotics and front dynamics of non-local Schrödinger operators.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; NONLOCAL_SPECTRA_THREADS takes precedence.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Command {
    /// Spectrum of L from its symbol, plateau eigenvalues, essential spectrum.
    Spectrum,
    /// Recurrence/transience classification of the jump kernel.
    Transience,
    /// Principal eigenvalue λ₀(R) over a scale grid.
    Eigen,
    /// Phase φ(θ, λ), prefactor, and Legendre tables.
    Asym,
    /// Front trace and front-law fit from a simulation.
    Front,
    /// Neumann-series limit and its comparison with the evolution from u ≡ 1.
    Stabilize,
    /// Local limit and resolvent-series oracle comparisons.
    Oracle,
}

fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var("NONLOCAL_SPECTRA_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "NONLOCAL_SPECTRA_THREADS: `{v}` is not a positive integer"
                ))
            }),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = threads(cli.jobs)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let path = cli
        .config
        .ok_or_else(|| CliError::Config("--config: required".into()))?;
    let cfg = ExperimentConfig::load(&path)?;
    let out = cli
        .out
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.experiment));
    if cli.verbose {
        eprintln!(
            "{:?}: experiment `{}`, config sha256 {}",
            cli.command,
            cfg.experiment,
            cfg.sha256()
        );
    }
    let sink = Sink::new(&out, cfg.sha256(), cli.verbose)?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg, &sink),
        Command::Transience => commands::transience(&cfg, &sink),
        Command::Eigen => commands::eigen(&cfg, &sink),
        Command::Asym => commands::asym(&cfg, &sink),
        Command::Front => commands::front(&cfg, &sink),
        Command::Stabilize => commands::stabilize(&cfg, &sink),
        Command::Oracle => commands::oracle(&cfg, &sink),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
