//! Datasets: the correlated-Gaussian synthetic benchmark, CSV ingestion, and
//! preprocessing helpers.

mod cache;
mod csv_io;
mod preprocess;
mod synthetic;

use serde::{Deserialize, Serialize};

pub use cache::{read_dataset, write_dataset, DatasetManifest, MAGIC};
pub use csv_io::{load_csv, load_csv_with, write_csv, CsvOptions};
pub use preprocess::{standardize, train_test_split, Standardization};
pub use synthetic::{ar_correlation_cholesky, generate_synthetic, SplitMix64};
pub(crate) use synthetic::stream_rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::objective::LassoProblem;

/// Regularization weight used for generated and loaded datasets unless
/// overridden.
pub const DEFAULT_ALPHA: f64 = 0.01;

/// Recipe for a synthetic sparse regression problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub d: usize,
    pub m: usize,
    /// Number of nonzero coordinates in the planted solution.
    pub s: usize,
    pub seed: u64,
    /// Feature correlation `c_ij = rho^|i-j|`.
    #[serde(default = "default_rho")]
    pub rho: f64,
}

fn default_rho() -> f64 {
    0.5
}

impl SyntheticSpec {
    pub fn new(d: usize, m: usize, s: usize, seed: u64) -> Self {
        SyntheticSpec {
            d,
            m,
            s,
            seed,
            rho: default_rho(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 {
            return Err(Error::InvalidArgument(format!(
                "d and m must be positive (d = {}, m = {})",
                self.d, self.m
            )));
        }
        if self.s > self.d {
            return Err(Error::InvalidArgument(format!(
                "need s <= d, got s = {} and d = {}",
                self.s, self.d
            )));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidArgument(format!("rho {} must be in [0, 1)", self.rho)));
        }
        Ok(())
    }

    /// Departures from the `s << d << m` regime. Valid but worth a warning.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.s * 2 > self.d {
            out.push(format!("s = {} is not small next to d = {}", self.s, self.d));
        }
        if self.d * 2 > self.m {
            out.push(format!("d = {} is not small next to m = {}", self.d, self.m));
        }
        out
    }
}

/// A least-squares problem together with whatever is known about where it
/// came from.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub problem: LassoProblem,
    /// Planted solution of a synthetic problem.
    pub ground_truth: Option<Vector>,
    pub spec: Option<SyntheticSpec>,
    /// Feature names, in column order.
    pub column_names: Option<Vec<String>>,
    pub target_name: Option<String>,
}

impl LabeledDataset {
    /// A dataset with no provenance.
    pub fn from_problem(problem: LassoProblem) -> Self {
        LabeledDataset {
            problem,
            ground_truth: None,
            spec: None,
            column_names: None,
            target_name: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.problem = self.problem.with_alpha(alpha)?;
        Ok(self)
    }

    /// Same metadata, new design and targets.
    pub(crate) fn rebuild(&self, a: Matrix, b: Vector) -> Result<Self> {
        Ok(LabeledDataset {
            problem: LassoProblem::new(a, b, self.problem.alpha())?,
            ground_truth: self.ground_truth.clone(),
            spec: self.spec.clone(),
            column_names: self.column_names.clone(),
            target_name: self.target_name.clone(),
        })
    }

    /// The rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let a = self.problem.a();
        let b = self.problem.b();
        let mut data = Vec::with_capacity(indices.len() * a.cols());
        let mut targets = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= a.rows() {
                return Err(Error::InvalidArgument(format!("row {i} out of range")));
            }
            data.extend_from_slice(a.row(i));
            targets.push(b[i]);
        }
        self.rebuild(Matrix::new(indices.len(), a.cols(), data)?, Vector::from(targets))
    }
}
