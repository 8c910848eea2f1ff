//! `sgrn` — simulate, analyse and calibrate logistic gene-network models.

mod commands;
mod fit_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sigmoid_grn::Error;

#[derive(Parser)]
#[command(name = "sgrn", version, about = "Logistic gene regulatory network toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a model and write its trajectory as CSV.
    Simulate(SimulateArgs),
    /// Equilibria, Lipschitz bounds, bistability or Hopf analysis.
    Analyze(AnalyzeArgs),
    /// Logistic parameters from a linear-activation model, or a trajectory fit.
    Calibrate(CalibrateArgs),
    /// Steepness-matched logistic for a Hill function.
    Convert(ConvertArgs),
    /// Write a preset as a model JSON file.
    Export(ExportArgs),
    /// List the built-in presets.
    Presets,
}

/// Where the model comes from.
#[derive(Args, Debug, Clone)]
pub struct ModelSource {
    /// Model JSON file.
    pub model: Option<PathBuf>,
    /// Built-in scenario instead of a file (see `sgrn presets`).
    #[arg(long, conflicts_with = "model")]
    pub preset: Option<String>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Initial state, comma-separated (constant history for delayed models).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    #[arg(long)]
    pub max_step: Option<f64>,
    /// Report the first time gene COMPONENT crosses LEVEL, as `component:level`
    /// (component by index or name).
    #[arg(long)]
    pub escape: Option<String>,
    /// Trajectory CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Equilibria,
    Lipschitz,
    Bistability,
    Hopf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Logistic,
    Hill,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Newton starting point for `equilibria`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub guess: Option<Vec<f64>>,
    /// Sampled spectral-norm check for `lipschitz` (number of points).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Feedback family for flag-driven `bistability`.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Logistic steepness λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Hill coefficient n.
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Loop gain; adds the fixed points at this gain.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of Hopf branches beyond the first.
    #[arg(long, default_value_t = 0)]
    pub k_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Basal production g.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "fit")]
    pub g: Option<f64>,
    /// Cross-activation strength g_cross.
    #[arg(long, allow_hyphen_values = true)]
    pub g_cross: Option<f64>,
    /// Threshold for slope/intercept matching (default: g/g_cross).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "weighted")]
    pub theta: Option<f64>,
    /// Weighted-input form σ(λ(g_cross·s − θ)).
    #[arg(long)]
    pub weighted: bool,
    /// Least-squares fit described by a JSON problem file.
    #[arg(long, conflicts_with_all = ["g", "g_cross", "theta", "weighted"])]
    pub fit: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ConvertArgs {
    /// `n,theta,orientation` with orientation activation|repression.
    #[arg(long)]
    pub hill: String,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
}

#[derive(Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub preset: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Mode(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Mode(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Mode(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::DelayedNetwork | Error::NotDelayed | Error::NonLogisticEdge(_) => CliError::Mode(msg),
            e if e.is_input_error() => CliError::Input(msg),
            _ => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Calibrate(a) => commands::calibrate(&a),
        Command::Convert(a) => commands::convert(&a),
        Command::Export(a) => commands::export(&a),
        Command::Presets => commands::list_presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
