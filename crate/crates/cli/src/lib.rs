//! `kronloc` command-line front end.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use kronloc_core::bounds::BoundsError;
use kronloc_core::fejer::FejerError;
use kronloc_core::lattice::LatticeError;
use kronloc_core::poly::PolyError;
use kronloc_core::replay::ReplayError;
use kronloc_core::search::SearchError;
use kronloc_core::verify::VerifyError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_NOT_FOUND: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("{message}")]
    NotFound { message: String, diagnostics: serde_json::Value },
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Failure(_) => EXIT_FAILURE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::NotFound { .. } => EXIT_NOT_FOUND,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::EnumerationCapExceeded { .. } => CliError::Cap(e.to_string()),
            LatticeError::NoNonzeroCombination { .. } => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FejerError> for CliError {
    fn from(e: FejerError) -> Self {
        match e {
            FejerError::SupportCap { .. } => CliError::Cap(e.to_string()),
            FejerError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            FejerError::Quadrature(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::PointsCapExceeded { .. } => CliError::Cap(e.to_string()),
            SearchError::Domain(_) => CliError::Usage(e.to_string()),
            SearchError::NotFound { ref best, accuracy } => CliError::NotFound {
                message: e.to_string(),
                diagnostics: serde_json::json!({ "accuracy": accuracy, "best": best }),
            },
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Domain(m) => CliError::Usage(m),
            BoundsError::Lattice(l) => l.into(),
            BoundsError::Fejer(f) => f.into(),
        }
    }
}

impl From<ReplayError> for CliError {
    fn from(e: ReplayError) -> Self {
        match e {
            ReplayError::Domain(m) => CliError::Usage(m),
            ReplayError::TupleCap { .. } => CliError::Cap(e.to_string()),
            ReplayError::Fejer(f) => f.into(),
            ReplayError::Lattice(l) => l.into(),
            ReplayError::Quadrature(q) => CliError::Failure(q.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Domain(_) | PolyError::Parse { .. } => CliError::Usage(e.to_string()),
            PolyError::Lattice(l) => l.into(),
            PolyError::Bounds(b) => b.into(),
            PolyError::Search(s) => s.into(),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Fejer(f) => f.into(),
            VerifyError::Replay(r) => r.into(),
            VerifyError::Bounds(b) => b.into(),
            VerifyError::Lattice(l) => l.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kronloc", version, about = "Quantitative Kronecker localization experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Flat `key = value` configuration file (overrides $KRONLOC_CONFIG)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Binary precision of the frequency values, >= 64
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long = "c0", global = true)]
    pub c0: Option<f64>,
    /// auto | threshold | exact-multiplicative
    #[arg(long, global = true)]
    pub zero_policy: Option<String>,
    #[arg(long, global = true)]
    pub enumeration_cap: Option<u64>,
    /// Search grid margin (default 0.1/omega)
    #[arg(long, global = true)]
    pub slack: Option<f64>,
    #[arg(long, global = true)]
    pub search_cap: Option<u64>,
    #[arg(long, global = true)]
    pub support_cap: Option<u64>,
    #[arg(long, global = true)]
    pub tuple_cap: Option<u64>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Single-line JSON
    #[arg(long, global = true)]
    pub compact: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest nonzero |Σ u_j λ_j| over max|u_j| <= U
    Xi(XiArgs),
    /// Theorem 1 and the classical localization bounds for one instance
    Bound(BoundArgs),
    /// Find t in [d, d+T] with every ‖tλ_j − β_j‖ <= 1/ω
    Search(SearchArgs),
    /// Run the Fejér and proof-replay check suites
    Verify(VerifyArgs),
    /// Transfer a torus value of a Dirichlet polynomial to real t
    Dirichlet(DirichletArgs),
    /// Fejér law utilities
    #[command(subcommand)]
    Fejer(FejerCommand),
    /// Proof-replay quantities
    #[command(subcommand)]
    Replay(ReplayCommand),
    /// Running minima of scaled discrepancies along t
    Liminf(LiminfArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("range").required(true).args(["u", "from_theorem"])))]
pub struct XiArgs {
    pub freq: PathBuf,
    /// Coefficient bound
    #[arg(long = "U")]
    pub u: Option<u64>,
    /// Use U = floor(6ω ln(Nω/C0))
    #[arg(long, num_args = 2, value_names = ["N", "OMEGA"])]
    pub from_theorem: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Theorem,
    Proof,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    pub freq: PathBuf,
    /// Must equal the number of frequencies
    pub n: Option<usize>,
    pub omega: Option<u64>,
    /// ε of the log-prime lower bound for Ξ
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// ε of Chen's localization (default 1/ω)
    #[arg(long)]
    pub chen_epsilon: Option<f64>,
    /// M for Bacon's and Chen's accuracies (default U)
    #[arg(long)]
    pub comparison_m: Option<u64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Theorem)]
    pub convention: ConventionArg,
    /// `omega=a..b`: one CSV row per ω
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    First,
    Best,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub freq: PathBuf,
    /// Comma-separated targets, one per frequency
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub d: f64,
    /// Interval length, or `auto` for the Theorem 1 bound
    #[arg(long = "T", default_value = "auto")]
    pub t: String,
    #[arg(long)]
    pub omega: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::First)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Suite {
    Fejer,
    Replay,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Reduced grids
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Args)]
pub struct DirichletArgs {
    pub poly: PathBuf,
    #[arg(long)]
    pub omega: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub d: f64,
    /// Interval length, or `auto` for the Theorem 1 bound
    #[arg(long = "T", default_value = "auto")]
    pub t: String,
    /// Torus target, one coordinate per frequency
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Take θ as the lift of this τ (self-consistency check)
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<f64>,
    /// Also estimate sup |Q| on the torus with this many seeded samples
    #[arg(long)]
    pub sup_budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum FejerCommand {
    /// Exact distribution of S_k
    Pmf {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Characteristic function of S_k and its Fourier sum
    Charfn {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
    },
    /// P{S_k = 0}
    Pzero {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Largest C0 with p_zero >= C0/(m√k) on a grid
    Calibrate {
        #[arg(long, default_value_t = 64)]
        m_max: u32,
        #[arg(long, default_value_t = 200)]
        k_max: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Exact,
    Quadrature,
    Asymptotic,
    All,
}

#[derive(Debug, Subcommand)]
pub enum ReplayCommand {
    /// E|sin(πT Z)/(πZ)| over nonzero Z = Σ λ_j Y_j
    Sinc {
        freq: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long = "T")]
        t: f64,
    },
    /// P{|Z| < ε}, exactly
    Smalldev {
        freq: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// K(r), optionally with the |x|^r identity at x
    Kr {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct LiminfArgs {
    pub freq: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Vec<f64>,
    #[arg(long)]
    pub t_max: f64,
    /// `integers` or `uniform:<samples>`
    #[arg(long, default_value = "integers")]
    pub grid: String,
}

/// Output of one invocation: what to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    commands::execute(cli, echo)
}
