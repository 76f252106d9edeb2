use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite {what} at iteration {iteration}")]
    NonFinite { what: &'static str, iteration: usize },

    /// Power iteration ran out of budget; `estimate` is the last Rayleigh quotient.
    #[error("power iteration did not converge after {iterations} iterations (best estimate {estimate})")]
    NotConverged { iterations: usize, estimate: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("problem is not strongly convex (mu = {mu:e})")]
    NotStronglyConvex { mu: f64 },

    #[error("trace too short: {len} records, need at least {needed}")]
    TraceTooShort { len: usize, needed: usize },

    #[error("trace does not carry iterates; rerun the solver with record_iterates")]
    MissingIterates,

    #[error("{0}")]
    TraceInvariant(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}, column {column:?}: {message}")]
    Csv {
        row: usize,
        column: String,
        message: String,
    },

    #[error("missing column {0:?}")]
    MissingColumn(String),

    #[error("column {column:?} has zero variance")]
    ZeroVariance { column: String },

    #[error("split of {rows} rows at fraction {fraction} leaves an empty side")]
    EmptySplit { rows: usize, fraction: f64 },

    #[error("malformed dataset file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dims(op: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            op,
            expected,
            found,
        }
    }
}
