//! `qdiv`: divergences, operator means and preserver experiments from the command line.
//!
//! Exit codes: 0 success, 1 unexpected verdict or failed suite, 2 invalid
//! input, 3 numerical non-convergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "qdiv", version, about = "Quantum divergences, operator means and preserver experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divergence D(A || B) between two matrix files.
    Compute {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        divergence: Divergence,
        /// Order of the Renyi families.
        #[arg(long)]
        alpha: Option<f64>,
        /// Operator convex function: neg_sqrt | hellinger | min_test | alpha:<a> | eta.
        #[arg(long)]
        f: Option<String>,
        /// Stopping tolerance of the epsilon limit (maximal divergence, singular B).
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run invariant suites; exit 1 if any property fails.
    Suite {
        /// JSON config `{"suites": [...], "dim", "trials", "seed", "tol"}`; every field is optional.
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a preserver experiment; exit 1 if the verdict is not the expected one.
    Preserve {
        /// JSON config `{"experiment", "dim", "alpha"?, "f"?, "divergence"?, "trials", "seed", "tol"}`.
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print whether A <= B in the chosen order.
    Order {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        order: OrderKind,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Mean A sigma B of two matrix files (A is the base argument).
    Mean {
        a: PathBuf,
        b: PathBuf,
        /// geometric | log_euclidean | log_product | kubo:<arithmetic|harmonic|geometric|hf:f>
        #[arg(long)]
        mean: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Divergence {
    Renyi,
    Sandwiched,
    Flat,
    Standard,
    Maximal,
}

impl Divergence {
    fn name(self) -> &'static str {
        match self {
            Self::Renyi => "renyi",
            Self::Sandwiched => "sandwiched",
            Self::Flat => "flat",
            Self::Standard => "standard",
            Self::Maximal => "maximal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderKind {
    Loewner,
    Chaotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Flags that override fields of a config file.
#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
