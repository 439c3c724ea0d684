use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rpc3bp_numerics::Precision;
use toolkit::{run_stage, Overrides, RunConfig, Stage};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the unperturbed separatrix
    Homoclinic,
    /// Fourier coefficients of the Melnikov potential
    Melnikov,
    /// Sample the stable and unstable invariant curves
    Manifolds,
    /// Splitting distance, homoclinic points and lobe areas
    Splitting,
    /// Cubic tangency curve by continuation in G0
    Tangency,
    /// Oscillatory-orbit demonstration near the homoclinic tangle
    Oscillate,
    /// Run the splitting or Melnikov stage over a (mu, g0) grid
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "toolkit", version, about = "RPC3BP splitting of separatrices near parabolic infinity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON overlay on the default configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    mu: Option<f64>,
    #[arg(long, global = true)]
    g0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    phi0: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    precision: Option<PrecisionArg>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stage = match cli.command {
        Command::Homoclinic => Stage::Homoclinic,
        Command::Melnikov => Stage::Melnikov,
        Command::Manifolds => Stage::Manifolds,
        Command::Splitting => Stage::Splitting,
        Command::Tangency => Stage::Tangency,
        Command::Oscillate => Stage::Oscillate,
        Command::Sweep => Stage::Sweep,
    };
    let overrides = Overrides {
        mu: cli.mu,
        g0: cli.g0,
        phi0: cli.phi0,
        tol: cli.tol,
        out: cli.out,
        precision: cli.precision.map(|p| match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }),
    };
    let result = RunConfig::load(cli.config.as_deref(), &overrides).and_then(|cfg| run_stage(stage, &cfg));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            for n in &outcome.notes {
                eprintln!("warning: {n}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
