//! Thin binary wrapper: argument parsing and exit-code mapping only; all the
//! work lives in [`elasto_np::cli`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use elasto_np::cli::{run, Mode};
use elasto_np::Error;

#[derive(Parser)]
#[command(name = "elasto-np", version, about = "Finite-frequency Neumann-Poincare spectra, polariton resonance and CALR design on spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV and JSON artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed override for randomized validation draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker-thread budget (reserved; computations are single-threaded).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table of the Neumann-Poincare operator over a range of orders.
    NpSpectrum(RunArgs),
    /// Core-free resonance quantity over a shell-modulus sweep.
    ResonanceSweep(RunArgs),
    /// Core-shell denominator tuning and critical radii.
    CalrDesign(RunArgs),
    /// Displacement field along a radial ray for a point-like source.
    FieldGrid(RunArgs),
    /// Identity, oracle and residual suites.
    Validate(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::NpSpectrum(a) => (Mode::NpSpectrum, a),
        Command::ResonanceSweep(a) => (Mode::ResonanceSweep, a),
        Command::CalrDesign(a) => (Mode::CalrDesign, a),
        Command::FieldGrid(a) => (Mode::FieldGrid, a),
        Command::Validate(a) => (Mode::Validate, a),
    };
    match run(mode, &args.config, &args.out, args.seed, args.threads) {
        Ok(outcome) => {
            eprintln!(
                "wrote {} and {}",
                outcome.csv_path.display(),
                outcome.summary_path.display()
            );
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more assertions failed");
                ExitCode::from(1)
            }
        }
        Err(Error::ConfigInvalid(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
