//! Per-iteration records and solver results.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// State at the start of iteration `k`, i.e. of the iterate `x_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    /// Composite objective `F(x_k)`.
    pub objective: f64,
    /// `‖∇f(x_k)‖` of the smooth part.
    pub grad_norm: f64,
    /// Step size used to move from `x_k` to `x_{k+1}`.
    pub step: f64,
    /// `‖x_k − x*‖` when a reference point is known.
    pub dist_to_opt: Option<f64>,
    /// Wall-clock seconds since the solve started.
    pub elapsed: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    records: Vec<TraceRecord>,
    /// Iterates `x_k` aligned with `records`, kept only on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    iterates: Option<Vec<Vector>>,
}

impl IterationTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// A trace that also stores every iterate alongside its record.
    pub fn with_iterates() -> Self {
        IterationTrace {
            records: Vec::new(),
            iterates: Some(Vec::new()),
        }
    }

    /// Appends a record, enforcing `k = 0, 1, 2, …` and a positive step.
    pub fn push(&mut self, record: TraceRecord) -> Result<()> {
        if self.iterates.is_some() {
            return Err(Error::TraceInvariant(
                "trace stores iterates; use push_with_iterate".into(),
            ));
        }
        self.check(&record)?;
        self.records.push(record);
        Ok(())
    }

    pub fn push_with_iterate(&mut self, record: TraceRecord, x: &[f64]) -> Result<()> {
        self.check(&record)?;
        let Some(iterates) = self.iterates.as_mut() else {
            return Err(Error::TraceInvariant("trace was built without iterates".into()));
        };
        iterates.push(Vector::from(x));
        self.records.push(record);
        Ok(())
    }

    fn check(&self, record: &TraceRecord) -> Result<()> {
        let expected = self.records.len();
        if record.k != expected {
            return Err(Error::TraceInvariant(format!(
                "record k = {} out of order, expected {expected}",
                record.k
            )));
        }
        if !(record.step > 0.0) {
            return Err(Error::TraceInvariant(format!(
                "step {} at k = {} is not positive",
                record.step, record.k
            )));
        }
        Ok(())
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn iterates(&self) -> Option<&[Vector]> {
        self.iterates.as_deref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxIters,
    GradTol,
    NonMonotone,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::MaxIters => "max-iters",
            StopReason::GradTol => "grad-tol",
            StopReason::NonMonotone => "non-monotone",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub final_x: Vector,
    /// `F(final_x)`.
    pub final_objective: f64,
    /// `‖∇f(final_x)‖`.
    pub final_grad_norm: f64,
    /// Number of updates performed; equals the last record's `k + 1`.
    pub iterations: usize,
    pub stop_reason: StopReason,
    /// Lipschitz constant computed by the solver, if any.
    pub lipschitz: Option<f64>,
    pub trace: IterationTrace,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: usize, step: f64) -> TraceRecord {
        TraceRecord {
            k,
            objective: 1.0,
            grad_norm: 1.0,
            step,
            dist_to_opt: None,
            elapsed: 0.0,
        }
    }

    #[test]
    fn push_enforces_order_and_positive_step() {
        let mut t = IterationTrace::new();
        t.push(record(0, 0.1)).unwrap();
        assert!(t.push(record(2, 0.1)).is_err());
        assert!(t.push(record(1, 0.0)).is_err());
        t.push(record(1, 0.2)).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn iterates_stay_aligned() {
        let mut t = IterationTrace::with_iterates();
        assert!(t.push(record(0, 0.1)).is_err());
        t.push_with_iterate(record(0, 0.1), &[1.0]).unwrap();
        assert!(t.push_with_iterate(record(5, 0.1), &[2.0]).is_err());
        assert_eq!(t.iterates().unwrap().len(), 1);
    }
}
