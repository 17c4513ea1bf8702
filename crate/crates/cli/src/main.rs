use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod angle;
mod commands;
mod output;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Unidirectional quantum walk: simulation, cross-checks, asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the walk and write ψ, ρ, J and ⟨X⟩ per site.
    Simulate(RunArgs),
    /// Run every method and report the largest deviation from the oracle.
    Compare(RunArgs),
    /// Exact PMF next to the asymptotic estimate, envelopes and ε-density.
    Asymptote(RunArgs),
    /// Time the direct inverse transform against the radix-2 FFT.
    Bench(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Closed,
    Spectral,
    Lambda,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SizeArg {
    Minimal,
    Pow2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    /// Coin angle θ ∈ [0, π/2]; radians or `pi/k` syntax.
    #[arg(long, value_parser = angle::parse_angle, default_value = "pi/4", allow_hyphen_values = true)]
    pub theta: f64,
    /// Coin phase φ ∈ [0, π].
    #[arg(long, alias = "varphi", value_parser = angle::parse_angle, default_value = "0", allow_hyphen_values = true)]
    pub phi: f64,
    /// Initial chirality angle η ∈ [0, π/2].
    #[arg(long, value_parser = angle::parse_angle, default_value = "pi/4", allow_hyphen_values = true)]
    pub eta: f64,
    /// Number of time steps t.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum, default_value = "minimal")]
    pub transform_size: SizeArg,
    #[arg(long = "format", value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Distance kept from the edges of the allowed interval (default max(2/t, 1e-3)).
    #[arg(long)]
    pub grid_guard: Option<f64>,
    /// Timing repeats per size for `bench`; the minimum is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Adds δ to ψ₀(0,t) of the closed-form result (exercises the failure path).
    #[arg(long, hide = true)]
    pub inject_error: Option<f64>,
}

fn configure_threads() -> Result<(), commands::CliError> {
    let Ok(value) = std::env::var("QWALK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| commands::CliError::Param(format!("QWALK_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| commands::CliError::Param(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Compare(a) => commands::compare(a),
        Command::Asymptote(a) => commands::asymptote(a),
        Command::Bench(a) => commands::bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
