use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{io_error, CliError, CliResult, DatasetArgs, Resolved, SolveArgs, Stage, EXIT_USAGE};
use crate::data::{load_csv_with, read_dataset, standardize, CsvOptions, LabeledDataset, SyntheticSpec, DEFAULT_ALPHA};
use crate::solvers::{solve, AdamConfig, Method, SolverConfig};
use crate::trace::{SolveResult, StopReason, TraceRecord};

pub const TRACE_HEADER: &str = "k,F,grad_norm,lambda,dist_to_opt,elapsed_s";

/// Where a dataset came from, enough to recognise it again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetIdentity {
    pub path: PathBuf,
    /// Hex SHA-256 of the file contents.
    pub sha256: String,
    pub d: usize,
    pub m: usize,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<SyntheticSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub log_target: bool,
    pub standardized: bool,
}

impl DatasetIdentity {
    /// Equal data and preprocessing, wherever the file lives.
    pub fn same_data(&self, other: &DatasetIdentity) -> bool {
        self.sha256 == other.sha256
            && self.alpha == other.alpha
            && self.target == other.target
            && self.log_target == other.log_target
            && self.standardized == other.standardized
    }
}

/// Everything needed to repeat a `solve` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub version: String,
    pub method: Method,
    pub dataset: DatasetIdentity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub solver: SolverConfig,
    pub adam: AdamConfig,
    /// Seconds since the Unix epoch.
    pub started_at: f64,
    pub finished_at: f64,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub final_objective: f64,
}

/// `result.json`: the solve result without its trace.
#[derive(Debug, Serialize)]
struct ResultFile<'a> {
    method: Method,
    final_objective: f64,
    final_grad_norm: f64,
    iterations: usize,
    stop_reason: StopReason,
    lipschitz: Option<f64>,
    final_x: &'a [f64],
}

pub(super) struct LoadedDataset {
    pub ds: LabeledDataset,
    pub identity: DatasetIdentity,
}

fn file_sha256(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Reads a `.bin` dataset from `gen` or a CSV file.
pub(super) fn load_dataset(path: &Path, args: &DatasetArgs, alpha: Option<f64>) -> CliResult<LoadedDataset> {
    let alpha = alpha.unwrap_or(DEFAULT_ALPHA);
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let mut ds = if is_csv {
        let target = args
            .target
            .clone()
            .ok_or_else(|| CliError::usage("a CSV dataset needs --target"))?;
        let opts = CsvOptions {
            target,
            log_target: args.log_target,
            alpha,
        };
        load_csv_with(path, &opts).data()?
    } else {
        if args.target.is_some() || args.log_target || args.standardize {
            return Err(CliError::usage("--target, --log-target and --standardize only apply to CSV datasets"));
        }
        read_dataset(path).data()?.with_alpha(alpha).usage()?
    };
    if args.standardize {
        ds = standardize(&ds, None).data()?.0;
    }
    let identity = DatasetIdentity {
        path: path.to_path_buf(),
        sha256: file_sha256(path)?,
        d: ds.problem.d(),
        m: ds.problem.m(),
        alpha,
        spec: ds.spec.clone(),
        target: ds.target_name.clone(),
        log_target: args.log_target,
        standardized: args.standardize,
    };
    Ok(LoadedDataset { ds, identity })
}

/// Resolves settings and builds the solver configuration for one dataset.
pub(super) fn configure(resolved: &Resolved, ds: &LabeledDataset) -> SolverConfig {
    SolverConfig {
        reference: ds.ground_truth.clone(),
        ..resolved.solver.clone()
    }
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn format_record(r: &TraceRecord) -> String {
    let dist = r.dist_to_opt.map(|v| v.to_string()).unwrap_or_default();
    format!("{},{},{},{},{},{}\n", r.k, r.objective, r.grad_norm, r.step, dist, r.elapsed)
}

/// Writes the trace CSV one flushed line per record so an interrupted run
/// still leaves a usable file.
struct TraceWriter {
    out: BufWriter<File>,
    path: PathBuf,
    error: Option<std::io::Error>,
}

impl TraceWriter {
    fn create(path: PathBuf) -> CliResult<Self> {
        let file = File::create(&path).map_err(|e| io_error(&path, e))?;
        let mut w = TraceWriter {
            out: BufWriter::new(file),
            path,
            error: None,
        };
        w.write(&format!("{TRACE_HEADER}\n"));
        Ok(w)
    }

    fn write(&mut self, line: &str) {
        if self.error.is_none() {
            let result = self.out.write_all(line.as_bytes()).and_then(|_| self.out.flush());
            self.error = result.err();
        }
    }

    fn finish(self) -> CliResult<()> {
        match self.error {
            Some(e) => Err(io_error(&self.path, e)),
            None => Ok(()),
        }
    }
}

pub(super) fn run(args: SolveArgs) -> CliResult<()> {
    let resolved = args.solver.resolve(args.method, args.data.alpha)?;
    let method = resolved
        .method
        .ok_or_else(|| CliError::new(EXIT_USAGE, "no --method given and none in the config file"))?;
    let loaded = load_dataset(&args.dataset, &args.data, resolved.alpha)?;
    let cfg = configure(&resolved, &loaded.ds);

    fs::create_dir_all(&args.out_dir).map_err(|e| io_error(&args.out_dir, e))?;
    let started_at = now();
    let mut trace_out = TraceWriter::create(args.out_dir.join("trace.csv"))?;
    let mut observer = |r: &TraceRecord| trace_out.write(&format_record(r));
    let result = solve(method, &loaded.ds.problem, &cfg, &resolved.adam, Some(&mut observer));
    trace_out.finish()?;
    let result = result.solver()?;
    let finished_at = now();

    write_json(&args.out_dir.join("result.json"), &result_file(method, &result))?;
    let manifest = RunManifest {
        software: "proxkit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        method,
        seed: loaded.ds.spec.as_ref().map(|s| s.seed),
        dataset: loaded.identity,
        solver: cfg,
        adam: resolved.adam,
        started_at,
        finished_at,
        iterations: result.iterations,
        stop_reason: result.stop_reason,
        final_objective: result.final_objective,
    };
    write_json(&args.out_dir.join("manifest.json"), &manifest)?;
    println!(
        "{method}: {} iterations, stop {}, F = {}",
        result.iterations, result.stop_reason, result.final_objective
    );
    Ok(())
}

fn result_file(method: Method, r: &SolveResult) -> ResultFile<'_> {
    ResultFile {
        method,
        final_objective: r.final_objective,
        final_grad_norm: r.final_grad_norm,
        iterations: r.iterations,
        stop_reason: r.stop_reason,
        lipschitz: r.lipschitz,
        final_x: &r.final_x,
    }
}

pub(super) fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::new(super::EXIT_DATA, e))? + "\n";
    fs::write(path, text).map_err(|e| io_error(path, e))
}
