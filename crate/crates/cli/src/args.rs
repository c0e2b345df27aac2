use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mindist::ensemble::{LawMode, DEFAULT_BUDGET};
use mindist::exact::Regime;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "mindist", version, about = "Minimal distance of random linear codes over F_q")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Global {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sampling commands.
    #[arg(long, global = true, env = "MINDIST_WORKERS")]
    pub workers: Option<usize>,
    /// Significant digits for log-domain evaluation.
    #[arg(long, global = true, default_value_t = 60)]
    pub digits: u32,
    /// Cap on codeword visits for sampling commands.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Also write the run manifest to this file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
}

impl Global {
    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(1)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    /// Bare exact value, for scalar results.
    Rational,
    /// Bare decimal value, for scalar results.
    Decimal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    Auto,
    Exact,
    LogDomain,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Auto => Regime::Auto,
            RegimeArg::Exact => Regime::Exact,
            RegimeArg::LogDomain => Regime::LogDomain,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Subspaces,
    Matrices,
}

impl From<ModeArg> for LawMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Subspaces => LawMode::AllSubspaces,
            ModeArg::Matrices => LawMode::AllMatrices,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    /// One independent vector per proportionality class.
    Independent,
    /// Codewords of a random code.
    Code,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailArg {
    None,
    Mass,
    NextMoment,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// P{wt(X) <= d} for uniform X in F_q^n, optionally with ratio bounds.
    Rho(RhoArgs),
    /// C.d.f. of the minimum weight of (q^k-1)/(q-1) independent vectors.
    WminCdf(WminArgs),
    /// Gumbel centring and its lattice sup distance.
    Gumbel(CodeArgs),
    /// Monte-Carlo law of d_min for random [n,k] codes.
    SampleDmin(SampleArgs),
    /// Exhaustive law of d_min for random [n,k] codes.
    ExactDmin(ExactDminArgs),
    /// d_min law against the minimum-weight law.
    Compare(CompareArgs),
    /// Moments of the count of low-weight codewords.
    Moments(MomentsArgs),
    /// Point masses from moments.
    InvertMoments(InvertArgs),
    /// Gilbert–Varshamov bounds.
    Gv(GvArgs),
    /// Fraction of random codes of dimension k_GV + bonus reaching distance d.
    GvExperiment(GvExperimentArgs),
    /// Re-run the command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rho(_) => "rho",
            Command::WminCdf(_) => "wmin-cdf",
            Command::Gumbel(_) => "gumbel",
            Command::SampleDmin(_) => "sample-dmin",
            Command::ExactDmin(_) => "exact-dmin",
            Command::Compare(_) => "compare",
            Command::Moments(_) => "moments",
            Command::InvertMoments(_) => "invert-moments",
            Command::Gv(_) => "gv",
            Command::GvExperiment(_) => "gv-experiment",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct RhoArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    /// Omit for the whole table.
    #[arg(long)]
    pub d: Option<usize>,
    /// Terms of the tail series for the ratio bounds.
    #[arg(long, requires = "d")]
    pub t: Option<usize>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct WminArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Omit for the whole table.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
    pub regime: RegimeArg,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CodeArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep rank-deficient generator draws.
    #[arg(long)]
    pub unconditioned: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ExactDminArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Subspaces)]
    pub mode: ModeArg,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Enumerate all codes instead of sampling.
    #[arg(long, conflicts_with = "trials")]
    pub exact: bool,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct MomentsArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long = "max-order", visible_alias = "m", default_value_t = 4)]
    pub max_order: usize,
    #[arg(long, value_enum, default_value_t = ModelArg::Independent)]
    pub model: ModelArg,
    /// Sample the code model instead of enumerating it.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct InvertArgs {
    /// Number of masses to recover.
    #[arg(long)]
    pub h: usize,
    /// Comma-separated moments of orders 1, 2, ...; rationals stay exact.
    #[arg(long, conflicts_with_all = ["q", "n", "k", "d"])]
    pub moments: Option<String>,
    #[arg(long, requires_all = ["n", "k", "d"])]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModelArg::Independent)]
    pub model: ModelArg,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TailArg::None)]
    pub tail: TailArg,
    /// Bound on P{Z > h} for `--tail mass`.
    #[arg(long, default_value_t = 0.0)]
    pub tail_mass: f64,
    /// Bound on Z for `--tail mass`.
    #[arg(long, default_value_t = 0.0)]
    pub tail_max: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GvArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Window parameter; enables the improved-bound fields.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Constant C in the dimension shift floor(log_q(n)/2 - C).
    #[arg(long, requires = "alpha")]
    pub shift_constant: Option<f64>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GvExperimentArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    /// Defaults to ceil(0.3 n) clamped into the window.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub dim_bonus: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub file: PathBuf,
}
