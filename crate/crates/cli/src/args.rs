use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "fibmachine",
    version,
    about = "Fibonacci-base adding machine, its Markov chain and fibered Julia sets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file, or directory for `repro`.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Overrides the level count (escape depth, orbit length or truncation).
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy expansion of an integer, most significant digit first.
    Encode { n: u64 },
    /// Value of a digit word.
    Decode { word: String },
    /// Successor of a Fibonacci word through the transducer.
    Succ { word: String },
    #[command(subcommand)]
    Chain(ChainCommand),
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Rasterizes the fibered Julia set of the configured sequence.
    Render(RenderArgs),
    /// Regenerates committed figure panels (`all`, `fig6`, `fig6-07`, `07`).
    Repro(ReproArgs),
}

#[derive(Debug, Subcommand)]
pub enum ChainCommand {
    /// Transition distribution of one state.
    Row { state: u64 },
    /// Truncated transition matrix on states below F_level, as CSV.
    Matrix { level: usize },
    /// Simulates the chain and prints a trajectory summary.
    Simulate {
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        /// Independent runs with seeds `seed, seed + 1, ...`.
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
    /// Transient, null recurrent or positive recurrent.
    Classify,
    /// Truncated invariant measure `mu_i = xi_i`.
    Stationary,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCommand {
    /// Values `q_{F_0} .. q_{F_N}`.
    Orbit {
        #[arg(allow_negative_numbers = true)]
        re: f64,
        #[arg(allow_negative_numbers = true)]
        im: f64,
    },
    /// Membership in E and the point-spectrum verdict.
    Member {
        #[arg(allow_negative_numbers = true)]
        re: f64,
        #[arg(allow_negative_numbers = true)]
        im: f64,
        /// Bound on the subset maxima before a point counts as escaped.
        #[arg(long, default_value_t = 1e6)]
        bound: f64,
    },
    /// Critical-orbit test for non-connectedness of E.
    Connectivity,
    /// Residual of the truncated approximate eigenvector.
    Residual {
        #[arg(allow_negative_numbers = true)]
        re: f64,
        #[arg(allow_negative_numbers = true)]
        im: f64,
        level: usize,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Square pixel count, overriding the grid.
    #[arg(long)]
    pub pixels: Option<u32>,
    /// Worker threads (0 picks the default).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    pub selector: String,
    /// Square pixel count, overriding each panel's grid.
    #[arg(long)]
    pub pixels: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Also write PNG files next to the PPM files.
    #[arg(long)]
    pub png: bool,
}
