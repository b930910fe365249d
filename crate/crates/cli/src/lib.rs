//! `abem` command-line front end.
//!
//! Every subcommand writes plain CSV/JSON files into `--out-dir`. Output bytes
//! depend only on inputs and seeds, never on wall-clock time or thread count.

use std::path::PathBuf;

use abem_core::ingest::parse_iso_date;
use abem_core::stats::{DEFAULT_BIN_COUNT, DEFAULT_LAGS, DEFAULT_TAIL_FRACTION};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

pub mod analyze;
pub mod figures;
pub mod simulate;

pub use analyze::{read_table_csv, read_table_json, AnalysisTable, TableColumn};
pub use simulate::{read_ensemble_summary, EnsembleSummary, RunReport, StatSummary};

#[derive(Debug, Parser)]
#[command(
    name = "abem",
    version,
    about = "Stylized-fact statistics and agent-based market simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Statistics table for one or more price files.
    Analyze(AnalyzeArgs),
    /// Run one simulation and write its price path, returns and report.
    Simulate(SimulateArgs),
    /// Run seeded replications and aggregate their reports.
    Ensemble(EnsembleArgs),
    /// Histogram, Q-Q and ACF data for a return series.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Autocorrelation lags, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LAGS.to_vec())]
    pub lags: Vec<usize>,
    /// Upper-tail fraction for the Hill estimator.
    #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
    pub tail_fraction: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// First date included (YYYY-MM-DD).
    #[arg(long, value_parser = parse_date)]
    pub from: Option<NaiveDate>,
    /// Last date included (YYYY-MM-DD).
    #[arg(long, value_parser = parse_date)]
    pub to: Option<NaiveDate>,
    #[arg(long, default_value = "Open")]
    pub price_column: String,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Price CSV; repeat for several columns.
    #[arg(long = "input")]
    pub inputs: Vec<PathBuf>,
    /// JSON manifest of labeled files and windows.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub stats: StatsArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub stats: StatsArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub replications: usize,
    /// Base seed; replication r uses seed + r.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run replications on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub stats: StatsArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Price CSV, or a returns CSV with a `return` column.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub input: Option<PathBuf>,
    /// Simulation config to draw a fresh return series from.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
    #[arg(long, default_value_t = DEFAULT_BIN_COUNT)]
    pub bins: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// False when nothing useful could be computed.
    pub success: bool,
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    parse_iso_date(s).map_err(|e| e.to_string())
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze(a) => analyze::run(a),
        Command::Simulate(a) => simulate::run_simulate(a),
        Command::Ensemble(a) => simulate::run_ensemble_cmd(a),
        Command::Figures(a) => figures::run(a),
    }
}

/// Parses an argument vector, program name first, and runs it.
pub fn run_args<I, T>(args: I) -> anyhow::Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(&Cli::try_parse_from(args)?)
}

pub(crate) fn create_out_dir(dir: &std::path::Path) -> anyhow::Result<()> {
    use anyhow::Context;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}
