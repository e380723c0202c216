use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "xlab", version, about = "Experiments on binary opinion games")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a game file for a named family or a seeded random instance.
    Gen(GenArgs),
    /// Nash equilibria, greedy equilibria and the social optimum.
    Nash(NashArgs),
    /// Prices of anarchy and stability.
    PoaPos(GameArg),
    /// Run best-response dynamics and record the trace.
    BrRun(BrRunArgs),
    /// Build and validate the adversarial schedule on a gadget chain.
    BrExpo(BrExpoArgs),
    /// Replace beliefs by best-response equivalent canonical ones.
    Canonicalize(CanonicalizeArgs),
    /// Exact cutwidth and an optimal ordering.
    Cutwidth(CutwidthArgs),
    /// Exact mixing time with spectral and bottleneck bounds.
    LogitMix(LogitMixArgs),
    /// Relaxation time, eigenvalue extremes and the congestion bound.
    Spectral(ChainArgs),
    /// The potential-bounded region around a consensus and its bottleneck.
    Bottleneck(ChainArgs),
    /// Contraction of the maximal coupling over adjacent profiles.
    CoupleCheck(CoupleArgs),
    /// Mixing quantities across a list of rationality values.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Clique,
    Bipartite,
    Star,
    Path,
    /// Star with weights `1/leaves` and the price-of-stability beliefs.
    PosStar,
    Gadget,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Players (clique, path, random), side size (bipartite), leaves (star,
    /// pos-star) or gadgets (gadget).
    #[arg(long)]
    pub n: usize,
    /// Edge weight as a decimal string.
    #[arg(long, default_value = "1")]
    pub weight: String,
    /// Common belief, decimal or `num/den`; gadget chains use 1/2.
    #[arg(long, default_value = "1/2")]
    pub belief: String,
    /// Gadget weight ratio, above 8.
    #[arg(long, default_value_t = 9)]
    pub ratio: u32,
    /// Required by the random family.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Probability of each non-tree edge in random graphs.
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
    /// Decimal digits of random weights.
    #[arg(long, default_value_t = 1)]
    pub weight_digits: u32,
    /// Largest random weight.
    #[arg(long, default_value_t = 2)]
    pub max_weight: u32,
    /// Decimal digits of random beliefs.
    #[arg(long, default_value_t = 2)]
    pub belief_digits: u32,
    /// Game file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GameArg {
    #[arg(long)]
    pub game: PathBuf,
}

#[derive(Debug, Args)]
pub struct NashArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Also test this profile, as hex.
    #[arg(long)]
    pub profile: Option<String>,
}

#[derive(Debug, Args)]
pub struct BrRunArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// `round_robin`, `random:SEED` or `file:PATH` with player indices.
    #[arg(long)]
    pub sched: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
    /// Start profile as hex.
    #[arg(long, default_value = "0x0")]
    pub start: String,
    /// Canonicalize beliefs before running.
    #[arg(long)]
    pub canonical: bool,
    /// Trace CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BrExpoArgs {
    #[arg(long)]
    pub gadgets: usize,
    /// Base weight of the last gadget.
    #[arg(long, default_value = "1")]
    pub eps_last: String,
    #[arg(long, default_value_t = 9)]
    pub ratio: u32,
    /// Trace CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CanonicalizeArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Canonical game file; embedded in the report when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CutwidthArgs {
    /// A graph or game file.
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct LogitMixArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Same as the global `--report`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoupleArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Simulated coalescence runs from the two consensus profiles.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    /// Required when `--trials` is positive.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Step cap per coalescence run.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Comma-separated rationality values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// CSV with columns beta, t_mix, t_rel, lb_bottleneck, ub_congestion.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
