//! Iterative solvers: plain gradient descent, proximal gradient descent with
//! a constant or a variable step, and Adam applied to the ℓ1 subgradient.
//!
//! Every solver records one [`TraceRecord`] per iteration describing `x_k`
//! before the update, then applies the shared stopping rules in
//! [`check_stop`].

mod adam;
mod controller;
mod gd;
mod prox_gd;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use adam::{adam_l1_solve, AdamConfig, AdamL1State};
pub use controller::{StepController, StepUpdate};
pub use gd::gd_solve;
pub use prox_gd::{prox_gd_constant_solve, prox_gd_variable_solve};

use crate::error::{Error, Result};
use crate::linalg::{distance, Vector};
use crate::objective::{LassoProblem, LipschitzMode};
use crate::trace::{IterationTrace, SolveResult, StopReason, TraceRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Iteration budget `N`.
    pub max_iters: usize,
    /// Stop once `‖∇f(x_{k+1})‖` drops below this.
    pub grad_tol: f64,
    /// Initial step of the variable-step method.
    pub lambda0: f64,
    pub mu0: f64,
    pub mu1: f64,
    /// Growth weights `η_k = eta_rho^k`.
    pub eta_rho: f64,
    /// Starting point; zeros when unset.
    pub x0: Option<Vector>,
    /// Stop when `F(x_{k+1}) > F(x_k)`. Ignored by Adam and plain GD.
    pub monotone_stop: bool,
    pub lipschitz_mode: LipschitzMode,
    /// Keep every iterate in the trace (needed by the bound checks).
    pub record_iterates: bool,
    /// Point used for the `dist_to_opt` column.
    #[serde(skip)]
    pub reference: Option<Vector>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 1000,
            grad_tol: 1e-3,
            lambda0: 0.1,
            mu0: 0.99,
            mu1: 0.95,
            eta_rho: 0.7,
            x0: None,
            monotone_stop: true,
            lipschitz_mode: LipschitzMode::Paper,
            record_iterates: false,
            reference: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("grad_tol {} must be >= 0", self.grad_tol)));
        }
        StepController::new(self.lambda0, self.mu0, self.mu1, self.eta_rho)?;
        Ok(())
    }

    pub(crate) fn start_point(&self, d: usize) -> Result<Vector> {
        match &self.x0 {
            Some(x0) if x0.len() != d => Err(Error::dims("x0", d, x0.len())),
            Some(x0) if !x0.is_finite() => Err(Error::InvalidArgument("x0 is not finite".into())),
            Some(x0) => Ok(x0.clone()),
            None => Ok(Vector::zeros(d)),
        }
    }

    pub fn stop_rules(&self) -> StopRules {
        StopRules {
            grad_tol: self.grad_tol,
            monotone: self.monotone_stop,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Gd,
    ProxConst,
    ProxVar,
    Adam,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Gd, Method::ProxConst, Method::ProxVar, Method::Adam];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gd => "gd",
            Method::ProxConst => "prox-const",
            Method::ProxVar => "prox-var",
            Method::Adam => "adam",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Runs `method`, calling `observer` with each record as soon as it exists.
pub fn solve(
    method: Method,
    p: &LassoProblem,
    cfg: &SolverConfig,
    adam: &AdamConfig,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    match method {
        Method::Gd => gd::run(p, cfg, observer),
        Method::ProxConst => prox_gd::run_constant(p, cfg, observer),
        Method::ProxVar => prox_gd::run_variable(p, cfg, observer),
        Method::Adam => adam::run(p, cfg, adam, observer),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopRules {
    pub grad_tol: f64,
    pub monotone: bool,
    pub max_iters: usize,
}

/// What one iteration `k` produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub k: usize,
    /// `F(x_k)`
    pub objective: f64,
    /// `F(x_{k+1})`
    pub next_objective: f64,
    /// `‖∇f(x_{k+1})‖`
    pub next_grad_norm: f64,
}

/// Precedence: gradient tolerance, then non-monotone, then the budget.
pub fn check_stop(step: &StepOutcome, rules: &StopRules) -> Option<StopReason> {
    if step.next_grad_norm < rules.grad_tol {
        Some(StopReason::GradTol)
    } else if rules.monotone && step.next_objective > step.objective {
        Some(StopReason::NonMonotone)
    } else if step.k + 1 >= rules.max_iters {
        Some(StopReason::MaxIters)
    } else {
        None
    }
}

/// Builds the trace and forwards records to an optional observer.
pub(crate) struct Recorder<'a, 'o> {
    trace: IterationTrace,
    started: Instant,
    reference: Option<&'a Vector>,
    observer: Option<&'o mut dyn FnMut(&TraceRecord)>,
}

impl<'a, 'o> Recorder<'a, 'o> {
    pub(crate) fn new(
        cfg: &'a SolverConfig,
        started: Instant,
        observer: Option<&'o mut dyn FnMut(&TraceRecord)>,
    ) -> Self {
        Recorder {
            trace: if cfg.record_iterates {
                IterationTrace::with_iterates()
            } else {
                IterationTrace::new()
            },
            started,
            reference: cfg.reference.as_ref(),
            observer,
        }
    }

    pub(crate) fn record(&mut self, k: usize, objective: f64, grad_norm: f64, step: f64, x: &[f64]) -> Result<()> {
        let record = TraceRecord {
            k,
            objective,
            grad_norm,
            step,
            dist_to_opt: self
                .reference
                .filter(|r| r.len() == x.len())
                .map(|r| distance(x, r)),
            elapsed: self.started.elapsed().as_secs_f64(),
        };
        if let Some(observer) = self.observer.as_mut() {
            observer(&record);
        }
        if self.trace.iterates().is_some() {
            self.trace.push_with_iterate(record, x)
        } else {
            self.trace.push(record)
        }
    }

    pub(crate) fn finish(self) -> IterationTrace {
        self.trace
    }
}

pub(crate) fn ensure_finite(value: f64, what: &'static str, iteration: usize) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { what, iteration })
    }
}
