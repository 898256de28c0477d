mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use chlab_core::numkit::precision::{set_default_bits, MIN_BITS};
use chlab_core::numkit::DEFAULT_BITS;
use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "chlab", version, about = "Camassa-Holm soliton and peakon profiles, identity checks and convergence sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Peakon profile and state at the configured times.
    Peakon(Common),
    /// Soliton profile in physical coordinates, optionally also parametric.
    Soliton(Common),
    /// Limit profile and its breakpoints.
    Limit(Common),
    /// Randomized identity and determinant checks.
    Verify(Common),
    /// Distance sweep between solitons and a target peakon as kappa shrinks.
    Converge(Common),
}

#[derive(Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory [default: config "out", else chlab-out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corpus seed for `verify` [default: config "seed", else 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Working precision in bits [default: config "bits", else 256].
    #[arg(long, env = "CHLAB_BITS")]
    bits: Option<u32>,
}

/// Settings resolved from flags, environment and configuration.
pub struct Run {
    pub cfg: config::Loaded,
    pub out: PathBuf,
    pub seed: u64,
}

fn resolve(common: &Common) -> CliResult<Run> {
    let cfg = config::load(&common.config)?;
    let bits = common.bits.or(cfg.config.bits).unwrap_or(DEFAULT_BITS);
    if bits < MIN_BITS {
        return Err(CliError::Validation(format!("bits must be at least {MIN_BITS}, got {bits}")));
    }
    set_default_bits(bits);
    let out = common
        .out
        .clone()
        .or_else(|| cfg.config.out.clone())
        .unwrap_or_else(|| PathBuf::from("chlab-out"));
    let seed = common.seed.or(cfg.config.seed).unwrap_or(42);
    Ok(Run { cfg, out, seed })
}

fn run(cli: Cli) -> CliResult<()> {
    let (common, cmd): (&Common, fn(&Run) -> CliResult<()>) = match &cli.command {
        Command::Peakon(c) => (c, commands::peakon::run),
        Command::Soliton(c) => (c, commands::soliton::run),
        Command::Limit(c) => (c, commands::limit::run),
        Command::Verify(c) => (c, commands::verify::run),
        Command::Converge(c) => (c, commands::converge::run),
    };
    cmd(&resolve(common)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
