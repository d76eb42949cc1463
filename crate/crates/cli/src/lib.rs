//! Command-line harness for `switchcost`: build assigners, run switching
//! cost experiments, drive the oracles and audit the embedding. Output is
//! plain text for single assignments and JSONL everywhere else.

pub mod algorithms;
mod commands;
pub mod error;
pub mod records;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use algorithms::{Algorithm, Assigner, Params};
pub use error::{CliError, Result};

/// Largest `w` the harness builds an assigner for.
pub const MAX_WORKERS: u32 = 1 << 16;
/// Largest task universe.
pub const MAX_TASKS: u64 = 1 << 32;
/// Longest walk.
pub const MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "switchcost", version, about = "Low switching-cost worker-task assignment experiments")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "ASSIGN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign workers to one task multiset and print the assignment.
    Assign(AssignArgs),
    /// Random adjacent walk; one JSONL record per step and a summary line.
    Walk(WalkArgs),
    /// Exact and exhaustive checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Embed weight-k vectors and report distortion.
    Embed(EmbedArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AlgArgs {
    /// Number of workers.
    #[arg(long)]
    pub w: u32,
    /// Task universe size.
    #[arg(long)]
    pub t: u64,
    /// Repetition constant of the stage-based assigners.
    #[arg(long, default_value_t = 4)]
    pub c: u32,
    #[arg(long, value_enum, default_value_t = Algorithm::Mrbb)]
    pub alg: Algorithm,
    /// Seeds per table family (explicit assigner only).
    #[arg(long, default_value_t = 8)]
    pub table_seeds: u32,
}

impl AlgArgs {
    pub fn params(&self, seed: u64) -> Result<Params> {
        if self.w == 0 || self.w > MAX_WORKERS {
            return Err(CliError::Usage(format!("--w must lie in [1, {MAX_WORKERS}]")));
        }
        if self.t == 0 || self.t > MAX_TASKS {
            return Err(CliError::Usage(format!("--t must lie in [1, {MAX_TASKS}]")));
        }
        if self.c == 0 {
            return Err(CliError::Usage("--c must be at least 1".into()));
        }
        Ok(Params {
            algorithm: self.alg,
            w: self.w,
            t: self.t,
            c: self.c,
            seed,
            table_seeds: self.table_seeds.max(1),
        })
    }
}

#[derive(Debug, Args)]
pub struct AssignArgs {
    #[command(flatten)]
    pub alg: AlgArgs,
    /// Comma-separated task ids in non-decreasing order, e.g. `2,5,5,9`.
    #[arg(long, allow_hyphen_values = true)]
    pub multiset: String,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub alg: AlgArgs,
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    /// Also insert and remove tasks, not only swap them.
    #[arg(long)]
    pub size_varying: bool,
    /// Defaults to a name built from the parameters.
    #[arg(long)]
    pub experiment_id: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 100_000_000)]
    pub node_limit: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Is there any assignment function with switching cost <= k?
    Exact {
        #[arg(long)]
        w: u32,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        k: usize,
        /// Only repeat-free task sets.
        #[arg(long)]
        sets_only: bool,
        /// Print the solution table when feasible.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exact maximum switching cost of an assigner over all adjacent pairs.
    Audit {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        sets_only: bool,
        #[arg(long)]
        size_varying: bool,
    },
    /// Search for w + 1 tasks whose w-subsets share one coloring.
    Ramsey {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Search for a small (k, eps) strong disperser [N] x [D] -> [M].
    Disperser {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Vector weight, which is also the number of workers.
    #[arg(long)]
    pub k: u32,
    /// Vector dimension, which is also the task universe.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 4)]
    pub c: u32,
    #[arg(long, value_enum, default_value_t = Algorithm::Mrbb)]
    pub alg: Algorithm,
    #[arg(long, default_value_t = 8)]
    pub table_seeds: u32,
    /// One vector per line: `n k p1,p2,...` or `n k p1:v1,p2:v2,...`.
    #[arg(long)]
    pub input: PathBuf,
    /// Sample this many random pairs instead of taking all of them.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Also measure the adjacent-step chain between each pair.
    #[arg(long)]
    pub chain: bool,
}

/// Runs `cli`, writing results to `out`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Assign(args) => commands::assign(&args, cli.seed, out),
        Command::Walk(args) => commands::walk(&args, cli.seed, out),
        Command::Oracle(cmd) => commands::oracle(&cmd, cli.seed, out),
        Command::Embed(args) => commands::embed(&args, cli.seed, out),
    }
}
