use std::path::PathBuf;

use cavi_core::scalar::MapFamily;
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cavi",
    version,
    about = "CAVI dynamics on the two-spin Ising model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// File of `key = value` defaults; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads for grid and sweep commands (output order is unaffected).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    /// Seed for randomly drawn initial states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run CAVI and print the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Locate and classify the fixed points of a scalar map (JSON).
    FixedPoints(MapArgs),
    /// Scan a parameter range for pitchfork and period-doubling points (JSON).
    Bifurcate(BifurcateArgs),
    /// Tabulate the Ising ELBO on an interior grid of the unit square (CSV).
    Surface(SurfaceArgs),
    /// Cobweb segments of a scalar map orbit (CSV).
    Cobweb(CobwebArgs),
    /// Long-run attractor points over a parameter grid (CSV).
    Diagram(DiagramArgs),
    /// Convergence report for Edward–Sokal CAVI from several starts (JSON).
    EsReport(EsReportArgs),
    /// Predicted Ising attractor for an initial state (JSON).
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    IsingSeq,
    IsingPar,
    Es,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Gradient {
    /// Closed-form partials when they agree with finite differences of the
    /// objective, finite differences otherwise.
    Auto,
    Printed,
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Seq,
    Par,
}

#[derive(Debug, Clone, Args)]
pub struct IsingArgs {
    /// Inverse temperature.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j12: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub h1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub h2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EsArgs {
    /// Edge probability `1 - exp(-β)`; `--beta` may be given instead.
    #[arg(long)]
    pub p: Option<f64>,
    /// Line-search grid spacing.
    #[arg(long, default_value_t = cavi_core::edward_sokal::DEFAULT_RESOLUTION)]
    pub resolution: f64,
    /// Scan every grid point instead of the coarse-then-fine search.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = ArgAction::Set)]
    pub exact_grid: bool,
    #[arg(long, value_enum, default_value_t = Gradient::Auto)]
    pub gradient: Gradient,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Initial state, comma separated (two values for Ising, three for
    /// Edward–Sokal). Drawn from `--seed` when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,
    /// Maximum number of update sweeps.
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// Convergence tolerance on successive states (max-norm).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub ising: IsingArgs,
    #[command(flatten)]
    pub es: EsArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// sigmoid, sigmoid2, logistic or logistic2.
    #[arg(long, value_parser = parse_family)]
    pub family: MapFamily,
    /// `β` for the sigmoid families, `µ` for the logistic ones.
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BifurcateArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: MapFamily,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Points per axis.
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[command(flatten)]
    pub ising: IsingArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CobwebArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub init: f64,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: MapFamily,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Parameter values, both ends included.
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, default_value_t = 2000)]
    pub burn_in: usize,
    /// Iterates kept per initial value after burn-in.
    #[arg(long, default_value_t = 64)]
    pub keep: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.3,0.7,0.9",
        allow_negative_numbers = true
    )]
    pub inits: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EsReportArgs {
    /// Inverse temperature; converted to `p = 1 - exp(-β)`.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of random initial states.
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    /// Convergence tolerance; twice the resolution when omitted.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Points per axis of the brute-force minimisation grid.
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[command(flatten)]
    pub es: EsArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        allow_negative_numbers = true
    )]
    pub init: Vec<f64>,
}

fn parse_family(s: &str) -> Result<MapFamily, String> {
    s.parse()
        .map_err(|_| format!("unknown family `{s}` (sigmoid, sigmoid2, logistic, logistic2)"))
}
