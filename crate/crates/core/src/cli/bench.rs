use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::solve::{configure, load_dataset, LoadedDataset};
use super::{io_error, BenchArgs, CliError, CliResult, Resolved, EXIT_DATA};
use crate::solvers::{solve, Method};

/// One (dataset, method) cell of the benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub dataset: String,
    pub method: Method,
    pub d: usize,
    pub m: usize,
    pub iterations: usize,
    /// Mean wall time over the repeats, Lipschitz estimation included.
    pub time_seconds: f64,
    pub speed_iters_per_second: f64,
    pub repeats: usize,
    pub stop_reason: String,
    pub final_objective: f64,
    pub error: Option<String>,
}

impl BenchmarkRow {
    fn failed(dataset: &LoadedDataset, method: Method, repeats: usize, error: String) -> Self {
        BenchmarkRow {
            dataset: dataset.identity.path.display().to_string(),
            method,
            d: dataset.ds.problem.d(),
            m: dataset.ds.problem.m(),
            iterations: 0,
            time_seconds: f64::NAN,
            speed_iters_per_second: f64::NAN,
            repeats,
            stop_reason: "failed".into(),
            final_objective: f64::NAN,
            error: Some(error),
        }
    }
}

/// Runs one cell `repeats` times. A solver error or a run whose iteration
/// count differs from the first one marks the cell as failed.
pub fn bench_cell(dataset: &LoadedDataset, method: Method, resolved: &Resolved, repeats: usize) -> BenchmarkRow {
    let cfg = configure(resolved, &dataset.ds);
    let mut total = 0.0;
    let mut first = None;
    for _ in 0..repeats {
        let started = Instant::now();
        let result = solve(method, &dataset.ds.problem, &cfg, &resolved.adam, None);
        total += started.elapsed().as_secs_f64();
        let result = match result {
            Ok(r) => r,
            Err(e) => return BenchmarkRow::failed(dataset, method, repeats, e.to_string()),
        };
        match &first {
            None => first = Some(result),
            Some(f) if f.iterations != result.iterations => {
                let msg = format!("iterations changed between repeats ({} vs {})", f.iterations, result.iterations);
                return BenchmarkRow::failed(dataset, method, repeats, msg);
            }
            Some(_) => {}
        }
    }
    let result = first.expect("repeats >= 1");
    let time = total / repeats as f64;
    BenchmarkRow {
        dataset: dataset.identity.path.display().to_string(),
        method,
        d: dataset.ds.problem.d(),
        m: dataset.ds.problem.m(),
        iterations: result.iterations,
        time_seconds: time,
        speed_iters_per_second: result.iterations as f64 / time,
        repeats,
        stop_reason: result.stop_reason.to_string(),
        final_objective: result.final_objective,
        error: None,
    }
}

pub(super) fn run(args: BenchArgs) -> CliResult<()> {
    if args.repeats == 0 {
        return Err(CliError::usage("--repeats must be at least 1"));
    }
    let resolved = args.solver.resolve(None, args.data.alpha)?;
    let mut datasets = Vec::new();
    for path in &args.datasets {
        datasets.push(load_dataset(path, &args.data, resolved.alpha)?);
    }
    let cells: Vec<(&LoadedDataset, Method)> = datasets
        .iter()
        .flat_map(|ds| args.methods.iter().map(move |&m| (ds, m)))
        .collect();

    let rows: Vec<BenchmarkRow> = if args.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = cells
                .iter()
                .map(|&(ds, m)| {
                    let resolved = &resolved;
                    scope.spawn(move || bench_cell(ds, m, resolved, args.repeats))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("benchmark worker panicked")).collect()
        })
    } else {
        cells
            .iter()
            .map(|&(ds, m)| bench_cell(ds, m, &resolved, args.repeats))
            .collect()
    };

    print!("{}", render_table(&rows));
    if let Some(path) = &args.csv {
        write_csv(path, &rows)?;
    }
    Ok(())
}

/// Aligned text table, one line per row.
pub fn render_table(rows: &[BenchmarkRow]) -> String {
    let header = ["dataset", "method", "d", "iter", "time_s", "speed_it/s", "stop"];
    let body: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            let name = Path::new(&r.dataset)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| r.dataset.clone());
            [
                name,
                r.method.to_string(),
                r.d.to_string(),
                r.iterations.to_string(),
                format!("{:.4}", r.time_seconds),
                format!("{:.1}", r.speed_iters_per_second),
                r.error.clone().unwrap_or_else(|| r.stop_reason.clone()),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            // text left, numbers right
            if i < 2 || i == 6 {
                s.push_str(&format!("{cell:<w$}"));
            } else {
                s.push_str(&format!("{cell:>w$}"));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &body {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn write_csv(path: &Path, rows: &[BenchmarkRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::new(EXIT_DATA, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::new(EXIT_DATA, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}
