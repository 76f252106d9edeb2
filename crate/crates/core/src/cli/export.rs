use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::solve::{write_json, RunManifest};
use super::{io_error, CliError, CliResult, ExportArgs, EXIT_DATA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub(super) enum Format {
    Csv,
    Json,
}

/// One row of a `trace.csv` written by `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TraceRow {
    k: usize,
    #[serde(rename = "F")]
    f: f64,
    grad_norm: f64,
    lambda: f64,
    dist_to_opt: Option<f64>,
    elapsed_s: f64,
}

/// A trace row with its log-scale friendly gap `F − F*`.
#[derive(Debug, Serialize)]
struct ExportRow<'a> {
    method: &'a str,
    k: usize,
    #[serde(rename = "F")]
    f: f64,
    #[serde(rename = "F_minus_Fstar")]
    gap: f64,
    /// 1 when the gap was raised to machine epsilon.
    clipped: u8,
    grad_norm: f64,
    lambda: f64,
    dist_to_opt: Option<f64>,
    elapsed_s: f64,
}

#[derive(Debug, Serialize)]
struct Series<'a> {
    method: String,
    run: String,
    rows: Vec<ExportRow<'a>>,
}

#[derive(Debug, Serialize)]
struct JsonExport<'a> {
    dataset: String,
    f_star: f64,
    series: Vec<Series<'a>>,
}

struct Run {
    dir: PathBuf,
    label: String,
    manifest: RunManifest,
    rows: Vec<TraceRow>,
}

fn data_error(message: impl std::fmt::Display) -> CliError {
    CliError::new(EXIT_DATA, message)
}

fn read_run(dir: &Path) -> CliResult<Run> {
    let manifest_path = dir.join("manifest.json");
    let text = fs::read_to_string(&manifest_path).map_err(|e| io_error(&manifest_path, e))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| data_error(format!("{}: {e}", manifest_path.display())))?;
    let trace_path = dir.join("trace.csv");
    let mut reader = csv::Reader::from_path(&trace_path).map_err(|e| data_error(format!("{}: {e}", trace_path.display())))?;
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<TraceRow>, _>>()
        .map_err(|e| data_error(format!("{}: {e}", trace_path.display())))?;
    Ok(Run {
        dir: dir.to_path_buf(),
        label: manifest.method.to_string(),
        manifest,
        rows,
    })
}

pub(super) fn run(args: ExportArgs) -> CliResult<()> {
    let mut runs = Vec::new();
    for dir in &args.runs {
        runs.push(read_run(dir)?);
    }
    let first = runs[0].manifest.dataset.clone();
    if let Some(other) = runs.iter().find(|r| !r.manifest.dataset.same_data(&first)) {
        return Err(data_error(format!(
            "{} was run on {} but {} on {}",
            runs[0].dir.display(),
            first.path.display(),
            other.dir.display(),
            other.manifest.dataset.path.display()
        )));
    }
    // repeated methods get the run directory appended to stay distinct
    let methods: Vec<_> = runs.iter().map(|r| r.manifest.method).collect();
    for run in runs.iter_mut() {
        if methods.iter().filter(|&&m| m == run.manifest.method).count() > 1 {
            let name = run.dir.file_name().map(|n| n.to_string_lossy().into_owned());
            run.label = format!("{}@{}", run.manifest.method, name.unwrap_or_default());
        }
    }

    if runs.len() == 1 && args.format == Format::Csv && args.f_star.is_none() {
        let src = runs[0].dir.join("trace.csv");
        fs::copy(&src, &args.out).map_err(|e| io_error(&src, e))?;
        return Ok(());
    }

    let f_star = args.f_star.unwrap_or_else(|| {
        runs.iter()
            .flat_map(|r| r.rows.iter().map(|row| row.f).chain([r.manifest.final_objective]))
            .fold(f64::INFINITY, f64::min)
    });
    let series: Vec<Series> = runs
        .iter()
        .map(|r| Series {
            method: r.label.clone(),
            run: r.dir.display().to_string(),
            rows: r.rows.iter().map(|row| export_row(&r.label, row, f_star)).collect(),
        })
        .collect();

    match args.format {
        Format::Json => write_json(
            &args.out,
            &JsonExport {
                dataset: first.path.display().to_string(),
                f_star,
                series,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_path(&args.out).map_err(data_error)?;
            for row in series.iter().flat_map(|s| &s.rows) {
                w.serialize(row).map_err(data_error)?;
            }
            w.flush().map_err(|e| io_error(&args.out, e))
        }
    }
}

fn export_row<'a>(method: &'a str, row: &TraceRow, f_star: f64) -> ExportRow<'a> {
    let gap = row.f - f_star;
    let clipped = !(gap >= f64::EPSILON);
    ExportRow {
        method,
        k: row.k,
        f: row.f,
        gap: if clipped { f64::EPSILON } else { gap },
        clipped: clipped as u8,
        grad_norm: row.grad_norm,
        lambda: row.lambda,
        dist_to_opt: row.dist_to_opt,
        elapsed_s: row.elapsed_s,
    }
}
