mod commands;
mod failure;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "fillin-lab", version, about = "Minimum fill-in laboratory")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph in DIMACS format.
    Gen {
        #[arg(value_enum)]
        model: Model,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
    },
    /// Build the gadget host of a vertex-cover instance.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "primitive")]
        mode: ReduceMode,
        /// Block factor of the colored gadget.
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// Degree bound for the coloring; defaults to max(3, max degree).
        #[arg(long)]
        d: Option<usize>,
        /// Writes `<prefix>.dimacs` and `<prefix>.json`.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
    /// Solve vertex cover or minimum fill-in on a graph.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum)]
        problem: Problem,
        /// Search-node budget of the exact solvers.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "min-fill")]
        strategy: Strategy,
    },
    /// Run a verification suite over a generated corpus.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Accuracy parameter of the transfer suite, as a decimal or `p/q`.
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Fill of one elimination ordering on a graph or Matrix Market pattern.
    Eliminate {
        input: PathBuf,
        /// natural, mcs, min-degree, min-fill, or a file of 1-based vertex ids.
        #[arg(long, default_value = "natural")]
        ordering: String,
    },
    /// Re-check a saved report offline.
    Report {
        report: PathBuf,
        /// Original input; its hash and the embedded certificate are checked against it.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Model {
    Gnp,
    Regular,
    Cycle,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceMode {
    Primitive,
    Colored,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Problem {
    Vc,
    Fillin,
    FillinHeuristic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Strategy {
    MinDegree,
    MinFill,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Sandwich,
    Decision,
    Transfer,
    Matrix,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
