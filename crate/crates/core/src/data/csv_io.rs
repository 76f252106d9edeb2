use std::path::Path;

use super::{LabeledDataset, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::objective::LassoProblem;

#[derive(Clone, Debug, PartialEq)]
pub struct CsvOptions {
    pub target: String,
    /// Replace the target by its natural logarithm (every value must be > 0).
    pub log_target: bool,
    pub alpha: f64,
}

impl CsvOptions {
    pub fn new(target: impl Into<String>) -> Self {
        CsvOptions {
            target: target.into(),
            log_target: false,
            alpha: DEFAULT_ALPHA,
        }
    }
}

/// Reads a numeric CSV with a header row. `target` becomes `b`, every other
/// column becomes a column of `A` in file order.
pub fn load_csv(path: impl AsRef<Path>, target: &str) -> Result<LabeledDataset> {
    load_csv_with(path, &CsvOptions::new(target))
}

/// Like [`load_csv`]. Row numbers in errors count data rows from 1.
pub fn load_csv_with(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let target_idx = headers
        .iter()
        .position(|h| *h == opts.target)
        .ok_or_else(|| Error::MissingColumn(opts.target.clone()))?;
    let features: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut data = Vec::new();
    let mut b = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Csv {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        for (j, cell) in record.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| Error::Csv {
                row,
                column: headers[j].clone(),
                message: format!("not a number: {cell:?}"),
            })?;
            if j != target_idx {
                data.push(value);
            } else if opts.log_target {
                if !(value > 0.0) {
                    return Err(Error::Csv {
                        row,
                        column: headers[j].clone(),
                        message: format!("cannot take the logarithm of {value}"),
                    });
                }
                b.push(value.ln());
            } else {
                b.push(value);
            }
        }
    }
    if b.is_empty() {
        return Err(Error::Format(format!("{} has no data rows", path.display())));
    }
    let a = Matrix::new(b.len(), features.len(), data)?;
    Ok(LabeledDataset {
        problem: LassoProblem::new(a, Vector::from(b), opts.alpha)?,
        ground_truth: None,
        spec: None,
        column_names: Some(features),
        target_name: Some(opts.target.clone()),
    })
}

/// Writes the features followed by the target. Values use the shortest
/// representation that parses back to the same bits.
pub fn write_csv(ds: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let a = ds.problem.a();
    let names: Vec<String> = match &ds.column_names {
        Some(names) if names.len() == a.cols() => names.clone(),
        _ => (0..a.cols()).map(|j| format!("x{}", j + 1)).collect(),
    };
    let target = ds.target_name.clone().unwrap_or_else(|| "y".to_string());

    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let write = |w: &mut csv::Writer<_>, fields: Vec<String>| w.write_record(fields).map_err(|e| csv_error(path, e));
    write(&mut writer, names.into_iter().chain([target]).collect())?;
    for (i, bi) in ds.problem.b().iter().enumerate() {
        let fields = a.row(i).iter().chain([bi]).map(|v| v.to_string()).collect();
        write(&mut writer, fields)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}
