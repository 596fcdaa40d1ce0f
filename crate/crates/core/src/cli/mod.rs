//! Command-line surface: operator documents, experiment commands and CSV
//! output. The `qso` binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 domain failure (invalid matrix, off-simplex
//! start, failed replay), 2 usage or parse error.

mod commands;
mod document;
mod tables;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use document::{MixedRow, OperatorBody, OperatorDocument, SCHEMA_VERSION};
pub use tables::{
    detect_kind, format_females, replay_conjecture, replay_ergodic, replay_trajectory,
    trajectory_header, write_conjecture_csv, write_ergodic_csv, write_trajectory_csv, CsvKind,
    ReplayReport, REPLAY_TOL,
};

/// Seed used whenever `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qso",
    version,
    about = "Quadratic stochastic operators on the simplex"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check stochasticity, classify, and count the empty-body slice.
    Validate {
        file: PathBuf,
        /// Average entries that are given in both parent orders.
        #[arg(long)]
        symmetrize: bool,
    },
    /// Iterate an operator and write the orbit as CSV.
    Trajectory {
        file: PathBuf,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Stop early within this max-norm distance of the limit (the
        /// empty-body vertex for F-QSOs, the previous point otherwise).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Multistart fixed-point search.
    FixedPoints {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Running Cesàro averages on a logarithmic schedule, as CSV.
    Ergodic {
        file: PathBuf,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, short = 'n', default_value_t = 2000)]
        n: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo scan for convergence of random F-QSOs to the empty body.
    Conjecture(ConjectureArgs),
    /// List presets, or emit one as an operator document.
    Presets {
        #[arg(long)]
        emit: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Recompute a CSV written by `trajectory`, `ergodic` or `conjecture`.
    Replay {
        csv: PathBuf,
        /// Operator document; needed for trajectory and ergodic CSVs.
        #[arg(long)]
        operator: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 50)]
        iterations: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct StartArgs {
    /// `uniform`, `random`, `random:<seed>`, or comma-separated coordinates.
    #[arg(long, default_value = "uniform", allow_hyphen_values = true)]
    pub start: String,
    /// Seed for `--start random`.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    All,
    Random,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub m: usize,
    /// Fixed female set, e.g. `2,3`.
    #[arg(long = "f", value_delimiter = ',', conflicts_with = "f_policy")]
    pub females: Vec<usize>,
    /// Female-set policy when `--f` is not given.
    #[arg(long, value_enum)]
    pub f_policy: Option<PolicyArg>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Per-trial CSV; `--csv` alone writes it to stdout.
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    pub csv: Option<PathBuf>,
}

/// Runs a parsed command against the given streams and returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    commands::dispatch(cli.command, out, err)
}

pub fn run(cli: Cli) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute(cli, &mut stdout.lock(), &mut stderr.lock())
}
