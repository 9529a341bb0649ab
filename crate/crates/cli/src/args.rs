use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "permplane",
    version,
    about = "Permutation entropy / Lempel-Ziv complexity plane"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the chaotic map catalog
    Catalog(CatalogArgs),
    /// Write one realization of a generator
    Generate(GenerateArgs),
    /// Entropy and complexity of one series
    Measure(MeasureArgs),
    /// Run an N-realization experiment and export summaries
    Plane(PlaneArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Only maps of this class (conservative, dissipative, noninvertible)
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseKind {
    #[value(name = "k-noise", alias = "knoise")]
    KNoise,
    Fgn,
    Fbm,
}

#[derive(Debug, Args)]
pub struct GeneratorArgs {
    /// Map id, key or name
    #[arg(long, conflicts_with = "noise")]
    pub map: Option<String>,
    #[arg(long, value_enum)]
    pub noise: Option<NoiseKind>,
    /// Spectral exponent for k-noise
    #[arg(long)]
    pub k: Option<f64>,
    /// Hurst exponent for fgn/fbm
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Series length
    #[arg(long = "L", alias = "length", default_value_t = permplane::plane::DESK_LENGTH)]
    pub length: usize,
    #[arg(long, default_value_t = permplane::seed::DEFAULT_SEED)]
    pub seed: u64,
    /// Map iterations discarded before output
    #[arg(long, default_value_t = permplane::gen_chaos::DEFAULT_BURN_IN)]
    pub burn_in: usize,
}

impl GeneratorArgs {
    pub fn is_set(&self) -> bool {
        self.map.is_some() || self.noise.is_some()
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Little-endian f64 instead of text
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Series file: one sample per line, or raw f64 with --binary
    #[arg(conflicts_with_all = ["map", "noise"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub binary: bool,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub tau: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PlaneArgs {
    /// Experiment config (TOML)
    #[arg(long)]
    pub config: PathBuf,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output prefix; writes PREFIX.csv and PREFIX.json
    #[arg(long, default_value = "plane")]
    pub out: PathBuf,
    /// Full-scale N and L
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long = "N", alias = "realizations")]
    pub realizations: Option<usize>,
    #[arg(long = "L", alias = "length")]
    pub length: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub tau: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the effective config and exit
    #[arg(long)]
    pub dump_config: bool,
}
