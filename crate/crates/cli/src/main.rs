//! `pcf`: generate graphs, build and verify h-pcf colourings, run the exact
//! oracle, evaluate tail bounds, and produce bound-comparison tables.

mod bench;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "pcf", version, about = "Proper h-conflict-free graph colouring")]
struct Cli {
    /// Output format of the command's result document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SeedArg {
    /// RNG seed; falls back to $PCF_SEED, then to the clock (logged to stderr).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph in DIMACS format.
    Gen(GenArgs),
    /// Deterministic greedy h-pcf colourings.
    Colour(ColourArgs),
    /// Random (Δ+3d)-precolouring for graphs of large minimum degree.
    Precolour(PrecolourArgs),
    /// One restart-driven nibble recolouring.
    Nibble(NibbleArgs),
    /// End-to-end h-pcf pipelines with a bound report.
    Pipeline(PipelineArgs),
    /// Check a colouring against an h-pcf or h-odd demand.
    Verify(VerifyArgs),
    /// Exact h-pcf / h-odd chromatic number of a small graph.
    Oracle(OracleArgs),
    /// Binomial tail bounds, exact tails and dominance simulations.
    Prob(ProbArgs),
    /// Bound-comparison tables over graph families.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GraphKind,
    /// Vertex count (or branch-vertex count for `subdivided`, leaf count for `star`).
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Edge probability for `random`.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Degree for `regular`.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Edges to subdivide for `subdivided`, e.g. `0-1,2-3`; all edges when omitted.
    #[arg(long)]
    pub edges: Option<String>,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Cycle,
    Path,
    Complete,
    Star,
    Petersen,
    Subdivided,
    Random,
    Tree,
    Regular,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyAlgo {
    /// Witness-reserving greedy, at most (h+1)Δ+1 colours.
    Greedy,
    /// The same along a smallest-last ordering, at most hΔ+d+1 colours.
    Degenerate,
    /// Partial greedy, at most hΔ+1 colours; only low-degree vertices get h witnesses.
    Partial,
}

#[derive(Args, Debug)]
pub struct ColourArgs {
    /// Graph in DIMACS format.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    #[arg(long, value_enum, default_value_t = GreedyAlgo::Greedy)]
    pub algo: GreedyAlgo,
    /// Colouring order for `greedy`: whitespace-separated vertex indices.
    #[arg(long)]
    pub ordering: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PrecolourArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Degree threshold; defaults to ⌈3√(hΔ)⌉ clamped to [δ, Δ].
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub max_restarts: usize,
    /// Resampling sweeps per attempt; defaults to ⌈10 ln n⌉.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Refuse parameters outside the proven regime.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantArg {
    A,
    B,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptanceArg {
    /// Stop at the first run with no bad event.
    BadEventFree,
    /// Stop at the first run whose colouring meets the target demand.
    Verified,
}

#[derive(Args, Debug)]
pub struct NibbleArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, ignore_case = true, default_value_t = VariantArg::A)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Witnesses reserved by high-degree (A) or low-degree (B) vertices.
    #[arg(long)]
    pub h0: Option<usize>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub eta: usize,
    /// Precolouring (colouring JSON); computed when omitted.
    #[arg(long)]
    pub precolouring: Option<PathBuf>,
    /// Palette size of a supplied precolouring; defaults to its largest colour.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub max_restarts: usize,
    #[arg(long, value_enum, default_value_t = AcceptanceArg::BadEventFree)]
    pub acceptance: AcceptanceArg,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineKind {
    /// Partial greedy followed by the witness-preserving nibble.
    Cor13,
    /// Large-minimum-degree precolouring followed by the cheaper nibble.
    Cor17,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(value_enum)]
    pub kind: PipelineKind,
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Scaled-down parameters (default).
    #[arg(long, conflicts_with = "strict")]
    pub desk: bool,
    /// Full-scale parameters with all hypotheses enforced.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub eta: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub max_restarts: usize,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetArg {
    Pcf,
    Odd,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    /// Colouring JSON `{"n": .., "colours": [..]}`.
    pub colouring: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    #[arg(long, value_enum, default_value_t = TargetArg::Pcf)]
    pub target: TargetArg,
    /// Demand `h` only from vertices of degree at most this, and `--h-outside` from the rest.
    #[arg(long)]
    pub low_degree: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub h_outside: usize,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    #[arg(long, value_enum, default_value_t = TargetArg::Pcf)]
    pub target: TargetArg,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Time limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[command(subcommand)]
    pub query: ProbQuery,
}

#[derive(Subcommand, Debug)]
pub enum ProbQuery {
    /// exp(-δ²μ/2) for the lower tail.
    ChernoffLower {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        delta: f64,
    },
    /// exp(-δ²μ/(2+δ)) for the upper tail.
    ChernoffUpper {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        delta: f64,
    },
    /// (enp/t)^t against the exact Pr[B(n,p) >= t].
    Tail {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: u64,
    },
    /// exp(-np/8) and exp(-np/3) against the exact half and double tails.
    Binomial {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
    },
    /// Monte Carlo comparison of a history-dependent sum with B(n,p).
    Dominance {
        #[arg(long, value_enum)]
        process: ProcessArg,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessArg {
    Independent,
    Sticky,
    CatchUp,
    Momentum,
    AlwaysOne,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Cycles,
    Subdivisions,
    Random,
    Regular,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Number of random instances (random, regular).
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// Largest cycle length, complete-graph order, or vertex count, per suite.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (random).
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    /// Degree (regular).
    #[arg(long, default_value_t = 60)]
    pub d: usize,
    /// Per-instance oracle time limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub oracle_timeout: f64,
    #[command(flatten)]
    pub seed: SeedArg,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.output.as_deref();
    let fmt = cli.format;
    match cli.command {
        Command::Gen(a) => commands::gen(&a, out),
        Command::Colour(a) => commands::colour(&a, fmt, out),
        Command::Precolour(a) => commands::precolour(&a, fmt, out),
        Command::Nibble(a) => commands::nibble(&a, fmt, out),
        Command::Pipeline(a) => commands::pipeline(&a, fmt, out),
        Command::Verify(a) => commands::verify(&a, fmt, out),
        Command::Oracle(a) => commands::oracle(&a, fmt, out),
        Command::Prob(a) => commands::prob(&a, fmt, out),
        Command::Bench(a) => bench::run(&a, fmt, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
