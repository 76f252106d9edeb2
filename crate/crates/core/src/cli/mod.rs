//! The `proxkit` command line: `gen`, `solve`, `bench`, `verify`, `export`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure,
//! 4 verification failure.

mod bench;
mod export;
mod solve;
mod verify;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use bench::BenchmarkRow;
pub use solve::{DatasetIdentity, RunManifest};

use crate::data::{generate_synthetic, write_dataset, SyntheticSpec};
use crate::error::Error;
use crate::objective::LipschitzMode;
use crate::solvers::{AdamConfig, Method, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable naming the dataset cache directory.
pub const CACHE_ENV: &str = "PROXKIT_CACHE";
const DEFAULT_CACHE: &str = ".proxkit-cache";

#[derive(Debug, Parser)]
#[command(name = "proxkit", version, about = "Proximal gradient descent for l1-regularized least squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset into the cache directory.
    Gen(GenArgs),
    /// Run one solver on one dataset.
    Solve(SolveArgs),
    /// Time methods across datasets.
    Bench(BenchArgs),
    /// Check the convergence bounds on random or given problems.
    Verify(VerifyArgs),
    /// Merge run traces into one plot-ready file.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Defaults to $PROXKIT_CACHE, then .proxkit-cache.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// How to read a dataset file.
#[derive(Debug, Clone, Args)]
struct DatasetArgs {
    /// Target column of a CSV dataset.
    #[arg(long)]
    target: Option<String>,
    /// Take the logarithm of the CSV target.
    #[arg(long)]
    log_target: bool,
    /// Standardize features and target of a CSV dataset.
    #[arg(long)]
    standardize: bool,
    /// Regularization weight (default 0.01).
    #[arg(long)]
    alpha: Option<f64>,
}

/// Solver settings; unset flags fall back to the config file, then defaults.
#[derive(Debug, Clone, Default, Args)]
struct SolverArgs {
    /// TOML file with `method`, `alpha`, `[solver]` and `[adam]` entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long)]
    mu0: Option<f64>,
    #[arg(long)]
    mu1: Option<f64>,
    #[arg(long)]
    eta_rho: Option<f64>,
    /// `paper` (λmax(AᵀA/2m)) or `analytic` (λmax(AᵀA/m)).
    #[arg(long)]
    lipschitz: Option<LipschitzMode>,
    /// Keep iterating when the objective increases.
    #[arg(long)]
    no_monotone_stop: bool,
    #[arg(long)]
    adam_step: Option<f64>,
    #[arg(long)]
    adam_beta1: Option<f64>,
    #[arg(long)]
    adam_beta2: Option<f64>,
    #[arg(long)]
    adam_epsilon: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// A `.bin` file from `gen` or a CSV file.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    method: Option<Method>,
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value = "run")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long = "dataset", required = true)]
    datasets: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "prox-const,prox-var,adam")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 7)]
    repeats: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run cells on worker threads. Timings then share the machine.
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    data: DatasetArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Check randomly generated small problems.
    #[arg(long)]
    random_suite: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random problems.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_delimiter = ',')]
    checks: Vec<crate::theory::CheckKind>,
    /// Iterations of the runs under test.
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Write every report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Output directory of a `solve` run.
    #[arg(long = "run", required = true)]
    runs: Vec<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: export::Format,
    #[arg(long)]
    out: PathBuf,
    /// Optimal value subtracted from `F`; defaults to the lowest value seen.
    #[arg(long)]
    f_star: Option<f64>,
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl fmt::Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }

    fn usage(message: impl fmt::Display) -> Self {
        Self::new(EXIT_USAGE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Tags library errors with the exit code of the stage they came from.
trait Stage<T> {
    fn data(self) -> CliResult<T>;
    fn solver(self) -> CliResult<T>;
    fn usage(self) -> CliResult<T>;
}

impl<T> Stage<T> for crate::error::Result<T> {
    fn data(self) -> CliResult<T> {
        self.map_err(|e| CliError::new(EXIT_DATA, e))
    }

    fn solver(self) -> CliResult<T> {
        self.map_err(|e| CliError::new(EXIT_SOLVER, e))
    }

    fn usage(self) -> CliResult<T> {
        self.map_err(CliError::usage)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(EXIT_DATA, Error::io(path, e))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Verify(args) => verify::run(args),
        Command::Export(args) => export::run(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("proxkit: error: {e}");
            e.code
        }
    }
}

/// `$PROXKIT_CACHE`, falling back to `.proxkit-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

fn gen(args: GenArgs) -> CliResult<()> {
    let spec = SyntheticSpec {
        d: args.d,
        m: args.m,
        s: args.s,
        seed: args.seed,
        rho: args.rho,
    };
    spec.validate().usage()?;
    for warning in spec.warnings() {
        eprintln!("proxkit: warning: {warning}");
    }
    let ds = generate_synthetic(&spec).data()?;
    let dir = args.out_dir.unwrap_or_else(cache_dir);
    let (path, manifest) = write_dataset(&ds, &dir).data()?;
    println!("{}", path.display());
    println!("sha256 {}", manifest.sha256);
    Ok(())
}

/// Layout of the `--config` file.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    method: Option<Method>,
    alpha: Option<f64>,
    solver: Option<SolverConfig>,
    adam: Option<AdamConfig>,
}

/// Settings after applying flags over the config file over defaults.
#[derive(Debug, Clone)]
struct Resolved {
    method: Option<Method>,
    alpha: Option<f64>,
    solver: SolverConfig,
    adam: AdamConfig,
}

impl SolverArgs {
    fn resolve(&self, method: Option<Method>, alpha: Option<f64>) -> CliResult<Resolved> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(Error::io(path, e)))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let mut solver = file.solver.unwrap_or_default();
        let mut adam = file.adam.unwrap_or_default();
        let set = |target: &mut f64, flag: Option<f64>| {
            if let Some(v) = flag {
                *target = v;
            }
        };
        if let Some(n) = self.max_iters {
            solver.max_iters = n;
        }
        set(&mut solver.grad_tol, self.grad_tol);
        set(&mut solver.lambda0, self.lambda0);
        set(&mut solver.mu0, self.mu0);
        set(&mut solver.mu1, self.mu1);
        set(&mut solver.eta_rho, self.eta_rho);
        if let Some(mode) = self.lipschitz {
            solver.lipschitz_mode = mode;
        }
        if self.no_monotone_stop {
            solver.monotone_stop = false;
        }
        set(&mut adam.step, self.adam_step);
        set(&mut adam.beta1, self.adam_beta1);
        set(&mut adam.beta2, self.adam_beta2);
        set(&mut adam.epsilon, self.adam_epsilon);
        solver.validate().usage()?;
        adam.validate().usage()?;
        Ok(Resolved {
            method: method.or(file.method),
            alpha: alpha.or(file.alpha),
            solver,
            adam,
        })
    }
}
