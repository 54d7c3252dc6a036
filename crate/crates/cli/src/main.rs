mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrlab::{Error, Grid, Unit};

#[derive(Parser, Debug)]
#[command(
    name = "corrlab",
    version,
    about = "Correlation measures, common information and simulation bounds for finite distributions"
)]
pub struct Cli {
    /// Write results here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pearson correlation, correlation ratios and maximal correlation.
    Corr(CorrArgs),
    /// Information-correlation function on a beta grid.
    Icf(IcfArgs),
    /// Closed-form Gaussian curves.
    Gaussian(GaussianArgs),
    /// Non-interactive simulation bounds for a source/target pair, or the binary sweep table.
    Nisim(NisimArgs),
}

#[derive(Args, Debug)]
pub struct CorrArgs {
    /// Distribution file (pair or triple).
    pub input: std::path::PathBuf,
    /// Also compute maximal correlation by alternating maximization.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200_000)]
    pub max_evals: usize,
    /// Constraint tolerance on the conditional maximal correlation.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 100.0)]
    pub penalty: f64,
}

#[derive(Args, Debug)]
pub struct IcfArgs {
    /// Pair distribution file.
    pub input: std::path::PathBuf,
    #[arg(long, default_value = "0:0.05:1")]
    pub beta_grid: Grid,
    /// Add the closed-form doubly-symmetric-binary column for crossover P0.
    #[arg(long, value_name = "P0")]
    pub dsbs: Option<f64>,
    /// Write one witness channel file per grid point into this directory.
    #[arg(long, value_name = "DIR")]
    pub witness_dir: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Args, Debug)]
pub struct GaussianArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub rho0: f64,
    #[arg(long, default_value = "0:0.05:1")]
    pub beta_grid: Grid,
    #[arg(long, default_value_t = Unit::Nats)]
    pub unit: Unit,
    /// Add the entropy-based lower bound column.
    #[arg(long)]
    pub lower_bound: bool,
    /// Joint differential entropy in nats for the lower bound; defaults to
    /// that of the bivariate Gaussian with correlation rho0.
    #[arg(long, allow_hyphen_values = true)]
    pub h_joint: Option<f64>,
}

#[derive(Args, Debug)]
pub struct NisimArgs {
    #[arg(long, requires = "tgt", conflicts_with = "fig1")]
    pub src: Option<std::path::PathBuf>,
    #[arg(long, requires = "src")]
    pub tgt: Option<std::path::PathBuf>,
    /// Sweep table over source parameters p (start:step:end).
    #[arg(long, value_name = "P_GRID", num_args = 0..=1, default_missing_value = "0:0.025:0.25")]
    pub fig1: Option<Grid>,
    #[arg(long, default_value = "0:0.05:1")]
    pub beta_grid: Grid,
    /// q resolution of the sweep table.
    #[arg(long, default_value_t = 1e-3)]
    pub q_step: f64,
    /// Coarse q resolution of the ICF column before endpoint refinement.
    #[arg(long, default_value_t = 0.02)]
    pub icf_q_step: f64,
    /// Channel-parameter grid step of the inner search.
    #[arg(long, default_value_t = 1e-3)]
    pub inner_step: f64,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::OptimizerBudgetExceeded { .. } => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("CORRLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
