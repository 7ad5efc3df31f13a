mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tsmetric::{DistanceSpec, Family, MatrixFormat};

#[derive(Parser, Debug)]
#[command(
    name = "tsmetric",
    version,
    about = "1-NN time-series benchmarks with learned Mahalanobis distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Error rates of one or more distances on UCR-format train/test splits.
    Bench(BenchArgs),
    /// Accuracy ratio of class-based diagonal Mahalanobis to Euclidean on synthetic data.
    LearningCurve(CurveArgs),
    /// Write a synthetic dataset in UCR format.
    Synth(SynthArgs),
    /// Export a covariance estimate as csv or a grayscale image.
    Covmat(CovmatArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct WorkerArgs {
    /// Worker threads; 0 uses every available core.
    #[arg(long, env = "TSMETRIC_WORKERS", default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Training file; pair each with a --test, in order.
    #[arg(long, requires = "test")]
    train: Vec<PathBuf>,
    #[arg(long, requires = "train")]
    test: Vec<PathBuf>,
    /// Directory laid out as <DIR>/<NAME>/<NAME>_{TRAIN,TEST}.tsv.
    #[arg(long, requires = "dataset")]
    ucr_dir: Option<PathBuf>,
    /// Dataset name under --ucr-dir.
    #[arg(long, requires = "ucr_dir")]
    dataset: Vec<String>,
    /// e.g. euclidean, dtw, dtw:band=10, mahalanobis:shrinkage:class, mahalanobis:diagonal:global:raw
    #[arg(long = "distance", required = true)]
    distances: Vec<DistanceSpec>,
    /// z-normalize every series after loading.
    #[arg(long)]
    znorm: bool,
    /// Append a per-distance count of best results across datasets.
    #[arg(long)]
    summary: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    workers: WorkerArgs,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, value_delimiter = ',', default_value = "cbf,cc,waveform")]
    family: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100,200,500,1000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 1000)]
    test_per_class: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the generated series as-is instead of z-normalizing them.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    workers: WorkerArgs,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    per_class: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CovmatArgs {
    #[arg(long)]
    train: PathBuf,
    /// A class label, or "global" for the pooled data.
    #[arg(long, default_value = "global")]
    class: String,
    #[arg(long, value_enum, default_value_t = CovEstimator::Sample)]
    estimator: CovEstimator,
    #[arg(long)]
    znorm: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = MatrixKind::Csv)]
    format: MatrixKind,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum CovEstimator {
    Sample,
    Shrinkage,
    Diagonal,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum MatrixKind {
    Csv,
    Pgm,
}

impl From<MatrixKind> for MatrixFormat {
    fn from(k: MatrixKind) -> Self {
        match k {
            MatrixKind::Csv => MatrixFormat::Csv,
            MatrixKind::Pgm => MatrixFormat::Pgm,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => commands::bench(args),
        Command::LearningCurve(args) => commands::learning_curve(args),
        Command::Synth(args) => commands::synth(args),
        Command::Covmat(args) => commands::covmat(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
