use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::parse::parse_complex;

#[derive(Debug, Parser)]
#[command(
    name = "anyonic",
    version,
    about = "Decoherence of anyonic charge superpositions under interferometric probing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the consistency equations of a model
    Verify(VerifyArgs),
    /// Evolve the target pair and print its density matrix
    Run(RunArgs),
    /// Channel factors for N = 0..=N-max as CSV
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Built-in model name or path to a model JSON file
    #[arg(long)]
    pub model: String,
    #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
    pub out: VerifyFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    #[default]
    Below,
    Above,
}

/// Model, target, probes and interferometer settings shared by `run` and
/// `sweep`.
#[derive(Debug, Args)]
pub struct SetupArgs {
    /// Built-in model name or path to a model JSON file
    #[arg(long)]
    pub model: String,
    /// Target charge amplitudes, e.g. "1:0.6,eps:0.8"
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// Probe state: a charge name, or "charge:dir:amp,..." with dir h or v.
    /// Repeat to give each probe its own state.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub probe: Vec<String>,
    /// First beam splitter transmission amplitude
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub t1: Option<Complex64>,
    /// First beam splitter reflection amplitude
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub r1: Option<Complex64>,
    /// Second beam splitter transmission amplitude (does not affect the result)
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub t2: Option<Complex64>,
    /// Phase on the first path (does not affect the result)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta1: f64,
    /// Phase on the second path (does not affect the result)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta2: f64,
    /// Side of the probe paths on which the target's antiparticle sits
    #[arg(long, value_enum, default_value_t)]
    pub placement: PlacementArg,
    /// Rescale target and probe amplitudes to unit norm
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModeArgs {
    /// Number of probes
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    /// Limit of infinitely many identical probes
    #[arg(long)]
    pub asymptotic: bool,
    /// Probes cross between target and antiparticle with certainty
    #[arg(long, value_name = "PASSES", num_args = 0..=1, default_missing_value = "1")]
    pub stray: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub setup: SetupArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Check the result: physical density matrix, and agreement with path
    /// enumeration when N <= 12. Exits 1 on failure.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub setup: SetupArgs,
    /// Largest probe count
    #[arg(long = "N-max", value_name = "N")]
    pub n_max: usize,
    /// Probes cross between target and antiparticle with certainty
    #[arg(long)]
    pub stray: bool,
}
