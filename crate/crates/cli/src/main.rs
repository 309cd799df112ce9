//! `eulerscan`: exact Euler characteristic transforms from the command line.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "eulerscan",
    version,
    about = "Exact Euler characteristic transforms of simplicial constructible functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty JSON with rationals as "p/q" strings.
    Records,
    /// Exact rationals, one row per curve piece or item.
    Csv,
    /// Approximate floats for plotting.
    PlotCsv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "records")]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler integral of a function.
    Chi {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// ECT curves over a directions file or seeded random directions.
    Ect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        directions: Option<PathBuf>,
        /// Number of random directions when no file is given.
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// QECT values at quadric probes; exact for supports of dimension at
    /// most one, piecewise-linear otherwise.
    Qect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        probes: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subdivision levels for the piecewise-linear estimate.
        #[arg(long, default_value_t = 4)]
        refine_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reconstructs a compactly supported function on the line from its
    /// ECT and compares it with the input.
    Invert1d {
        #[arg(long)]
        input: PathBuf,
        /// Random queries on top of every vertex and gap midpoint.
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fiber Euler characteristics, closed form against the sphere-mesh
    /// oracle.
    FiberChi {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        refine_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded theorem checks; exits nonzero if any fails.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        refine_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Chi { input, out } => commands::chi(&input, &out),
        Command::Ect {
            input,
            directions,
            count,
            seed,
            out,
        } => commands::ect(&input, directions.as_deref(), count, seed, &out),
        Command::Qect {
            input,
            probes,
            count,
            seed,
            refine_max,
            out,
        } => commands::qect(&input, probes.as_deref(), count, seed, refine_max, &out),
        Command::Invert1d {
            input,
            count,
            seed,
            out,
        } => commands::invert1d(&input, count, seed, &out),
        Command::FiberChi {
            input,
            refine_max,
            out,
        } => commands::fiber_chi(&input, refine_max, &out),
        Command::Verify {
            seed,
            refine_max,
            out,
        } => verify::run(seed, refine_max, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
