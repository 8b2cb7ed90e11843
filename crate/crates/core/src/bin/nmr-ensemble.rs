use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nmr_ensemble::cli::{run_simulate, run_sweep, summary, RunConfig, RunOutcome};
use nmr_ensemble::Error;

/// Pure-state vs density-matrix statistics of an NMR ensemble computation.
///
/// Exit codes: 0 success, 1 usage or configuration error, 2 numerical
/// validation failure.
#[derive(Debug, Parser)]
#[command(name = "nmr-ensemble", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a ten-line verdict to stdout.
    #[arg(long, global = true)]
    summary: bool,

    /// Report destination; overrides `output_path` from the config.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Frobenius radius around I/K used for the `within_ball` check.
    #[arg(long, global = true)]
    ball_radius: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one circuit through both readout pathways and analyse entanglement.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Cross-check the pathways on seeded random circuits.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NUMERIC),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { EXIT_NUMERIC } else { EXIT_CONFIG })
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (config_path, n) = match &cli.command {
        Command::Simulate { config } => (config, None),
        Command::Sweep { config, n } => (config, Some(*n)),
    };
    let mut config = RunConfig::load(config_path)?;
    if let Some(r) = cli.ball_radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Config(format!("--ball-radius must be positive, got {r}")));
        }
        config.ball_radius = Some(r);
    }
    let outcome = match n {
        None => run_simulate(&config)?,
        Some(n) => run_sweep(&config, n)?,
    };
    let output = cli.output.or_else(|| config.resolved_output_path());
    emit(&outcome, output.as_deref(), cli.summary)?;
    if !outcome.validated {
        eprintln!("error: numerical validation failed (pathways disagree beyond 1e-10 * M)");
    }
    Ok(outcome.validated)
}

fn emit(outcome: &RunOutcome, output: Option<&std::path::Path>, with_summary: bool) -> Result<(), Error> {
    let json = outcome.to_json();
    match output {
        Some(path) => std::fs::write(path, json).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?,
        None if !with_summary => print!("{json}"),
        None => {}
    }
    if with_summary {
        for line in summary(&outcome.report) {
            println!("{line}");
        }
    }
    Ok(())
}
