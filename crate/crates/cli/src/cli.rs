use std::path::PathBuf;

use asp_core::corpus::ReportFormat;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "asp", version, about = "Article prestige over citation networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve article prestige and write the per-article table.
    Asp(CommonArgs),
    /// Sweep damping factor and citing window for minimal subject deviation.
    Sweep(CommonArgs),
    /// Descriptive statistics: summaries, tail indexes, deciles, intensity.
    Stats(CommonArgs),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
    /// Run preprocessing and print what was removed.
    GraphCheck(GraphCheckArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub articles: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Binary graph snapshot used instead of --articles/--edges (asp and sweep).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub cluster_map: Option<PathBuf>,
    #[arg(long)]
    pub grade_table: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(ReportFormat))]
    pub format: Option<ReportFormat>,
    /// Worker threads, 0 = all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Damping factor, 0 < d < 1.
    #[arg(long)]
    pub d: Option<f64>,
    /// Citing window in years.
    #[arg(long)]
    pub window: Option<u32>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Also restrict the solver's graph to the citing window.
    #[arg(long)]
    pub window_asp_graph: Option<bool>,
    /// Comma-separated damping factors for the sweep.
    #[arg(long, value_delimiter = ',')]
    pub d_values: Option<Vec<f64>>,
    /// Comma-separated windows for the sweep.
    #[arg(long, value_delimiter = ',')]
    pub w_values: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n_articles: usize,
    #[arg(long, default_value_t = 1981)]
    pub year_start: i32,
    #[arg(long, default_value_t = 2020)]
    pub year_end: i32,
    #[arg(long, default_value_t = 8)]
    pub n_subjects: usize,
    #[arg(long, default_value_t = 10.0)]
    pub mean_out_degree: f64,
    #[arg(long, default_value_t = 1.0)]
    pub attachment_exponent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hot_subject_boost: f64,
    #[arg(long, default_value_t = 4)]
    pub journals_per_subject: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for articles.tsv and edges.tsv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GraphCheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Write a binary snapshot of the preprocessed graph here.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

