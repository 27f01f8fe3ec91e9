//! Command-line front end: generate instances, build assignments, measure
//! them and run the small-instance oracles. Every command reads and writes
//! JSON files tagged with a schema version; `compare` writes CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use topoctl_core::{MeasureMode, Model};

mod commands;
mod files;

pub use commands::{build, compare, histogram, BuildDetails, Built, CompareRow, HistogramBin};
pub use files::{read_assignment, read_instance, write_atomic, AssignmentFile};

/// Exit status for unreadable or unwritable files.
pub const EXIT_IO: i32 = 1;
/// Exit status for usage errors and rejected inputs.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Domain(#[from] topoctl_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Csv(_) => EXIT_IO,
            CliError::Parse { .. } | CliError::Domain(_) | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "topoctl",
    version,
    about = "Bounded-radius, low-interference topology control"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Build a radii assignment for an instance.
    Build(BuildArgs),
    /// Report validity and interference of an assignment.
    Analyze(AnalyzeArgs),
    /// Build and measure several methods, one CSV row each.
    Compare(CompareArgs),
    /// Exhaustive oracles for small instances.
    Oracle(OracleArgs),
    /// Dump clusters, leaders and witnesses of the bounded transform.
    Explain(ExplainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    LowerBound,
    UniformRandom,
    ClusteredPlusOutlier,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: GenKind,
    /// Lower-bound family index (`2^k` points).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    #[arg(long, default_value_t = 100.0)]
    pub separation: f64,
    /// Instance file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Uniform,
    Lnn,
    Bounded,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Uniform => "uniform",
            Method::Lnn => "lnn",
            Method::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub method: Method,
    /// Uniform radius or bounded cap; defaults to `r_min`.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Input assignment for `bounded`; defaults to the LNN construction.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "symmetric")]
    pub model: Model,
    /// Assignment file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Defaults to the exact mode of the instance dimension, else `at_sensors`.
    #[arg(long)]
    pub mode: Option<MeasureMode>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl MeasureArgs {
    fn mode_for(&self, dim: usize) -> MeasureMode {
        self.mode
            .unwrap_or_else(|| MeasureMode::exact_for(dim).unwrap_or(MeasureMode::AtSensors))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub instance: PathBuf,
    pub assignment: PathBuf,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Defaults to the model recorded in the assignment file.
    #[arg(long)]
    pub model: Option<Model>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub instance: PathBuf,
    #[arg(long, value_delimiter = ',', default_values = ["uniform", "lnn", "bounded"])]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value = "symmetric")]
    pub model: Model,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// CSV file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleWhat {
    MinInterference,
    MaxDepth,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub what: OracleWhat,
    #[arg(long, default_value = "symmetric")]
    pub model: Model,
    /// Assignment probed by `max-depth`.
    #[arg(long)]
    pub assignment: Option<PathBuf>,
    /// Grid pitch for `max-depth`; defaults to an eighth of the smallest
    /// positive gap between sensors.
    #[arg(long)]
    pub pitch: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => commands::gen(args, stdout, stderr),
        Command::Build(args) => commands::build_cmd(args, stdout, stderr),
        Command::Analyze(args) => commands::analyze(args, stdout),
        Command::Compare(args) => commands::compare_cmd(args, stdout),
        Command::Oracle(args) => commands::oracle(args, stdout),
        Command::Explain(args) => commands::explain(args, stdout),
    }
}
