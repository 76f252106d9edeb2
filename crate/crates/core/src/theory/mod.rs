//! Convergence guarantees as executable checks over iteration traces.
//!
//! Each `check_*` function evaluates one inequality at every index a trace
//! allows and collects the indices where it fails by more than [`SLACK`].
//! Iterate-based checks need a trace recorded with
//! [`SolverConfig::record_iterates`](crate::SolverConfig).

mod suite;

use serde::{Deserialize, Serialize};

pub use suite::{
    random_instance, random_suite, reference_solution, verify_problem, CheckKind, CheckOutcome, CheckStatus,
    VerifyConfig,
};

use crate::error::{Error, Result};
use crate::linalg::{distance, smallest_eigenvalue, Vector};
use crate::objective::{LassoProblem, LipschitzMode, POWER_MAX_ITERS, POWER_TOL};
use crate::prox::generalized_gradient_from;
use crate::trace::IterationTrace;

/// Absolute tolerance on every inequality.
pub const SLACK: f64 = 1e-9;
/// Smallest curvature treated as strong convexity.
pub const MU_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    /// Which inequality of a multi-part check failed.
    pub form: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// Number of inequalities evaluated.
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
    /// Largest `lhs − rhs` seen, violating or not.
    pub worst_slack: f64,
    /// Index where `worst_slack` occurred.
    pub tightest_index: Option<usize>,
}

struct ReportBuilder {
    report: BoundReport,
    tolerance: f64,
}

impl ReportBuilder {
    fn new(name: &str, tolerance: f64) -> Self {
        ReportBuilder {
            report: BoundReport {
                name: name.to_string(),
                checked: 0,
                violations: Vec::new(),
                passed: true,
                worst_slack: f64::NEG_INFINITY,
                tightest_index: None,
            },
            tolerance,
        }
    }

    fn check(&mut self, index: usize, form: &str, lhs: f64, rhs: f64) {
        let r = &mut self.report;
        r.checked += 1;
        let slack = lhs - rhs;
        // NaN on either side counts as a violation
        if !(slack <= r.worst_slack) {
            r.worst_slack = if slack.is_nan() { f64::INFINITY } else { slack };
            r.tightest_index = Some(index);
        }
        if !(slack <= self.tolerance) {
            r.violations.push(Violation {
                index,
                form: form.to_string(),
                lhs,
                rhs,
                slack,
            });
        }
    }

    fn finish(mut self) -> BoundReport {
        self.report.passed = self.report.violations.is_empty();
        self.report
    }
}

/// Smallest eigenvalue `μ` of `AᵀA/m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongConvexityEstimate {
    pub mu: f64,
    pub valid: bool,
}

/// Estimates `μ` by inverse iteration. A Hessian that is not numerically
/// positive definite gives `μ = 0`.
pub fn estimate_strong_convexity(p: &LassoProblem) -> Result<StrongConvexityEstimate> {
    let mu = match smallest_eigenvalue(p.hessian(), POWER_TOL, POWER_MAX_ITERS) {
        Ok(mu) => mu.max(0.0),
        Err(Error::NotPositiveDefinite { .. }) => 0.0,
        Err(Error::NotConverged { estimate, .. }) => (1.0 / estimate).max(0.0),
        Err(e) => return Err(e),
    };
    Ok(StrongConvexityEstimate {
        mu,
        valid: mu > MU_TOLERANCE,
    })
}

fn analytic_lipschitz(p: &LassoProblem) -> Result<f64> {
    p.lipschitz(LipschitzMode::Analytic)
}

fn require_len(trace: &IterationTrace, needed: usize) -> Result<()> {
    if trace.len() < needed {
        return Err(Error::TraceTooShort {
            len: trace.len(),
            needed,
        });
    }
    Ok(())
}

fn iterates<'t>(p: &LassoProblem, trace: &'t IterationTrace) -> Result<&'t [Vector]> {
    let xs = trace.iterates().ok_or(Error::MissingIterates)?;
    if let Some(x) = xs.iter().find(|x| x.len() != p.d()) {
        return Err(Error::dims("trace iterate", p.d(), x.len()));
    }
    Ok(xs)
}

/// The single step of a constant-step trace, checked against `1/L`.
fn constant_step(trace: &IterationTrace, lipschitz: f64) -> Result<f64> {
    let step = trace.records()[0].step;
    if trace.steps().any(|s| s != step) {
        return Err(Error::InvalidArgument("trace does not use a constant step".into()));
    }
    check_step(step, lipschitz)?;
    Ok(step)
}

fn check_step(step: f64, lipschitz: f64) -> Result<()> {
    if step > (1.0 + 1e-12) / lipschitz {
        return Err(Error::InvalidArgument(format!(
            "step {step} exceeds 1/L = {} so the bound does not apply",
            1.0 / lipschitz
        )));
    }
    Ok(())
}

fn objective_at(p: &LassoProblem, x: &[f64]) -> Result<f64> {
    Ok(p.evaluate(x)?.smooth + p.reg_value(x))
}

fn check_square(p: &LassoProblem, x_star: &[f64]) -> Result<()> {
    if x_star.len() != p.d() {
        return Err(Error::dims("reference solution", p.d(), x_star.len()));
    }
    Ok(())
}

/// `f(x_{k+1}) ≤ f(x_k) − ‖∇f(x_k)‖²/2L` on a gradient descent trace.
pub fn check_max_decrease(p: &LassoProblem, trace: &IterationTrace) -> Result<BoundReport> {
    require_len(trace, 2)?;
    let lipschitz = analytic_lipschitz(p)?;
    for s in trace.steps() {
        check_step(s, lipschitz)?;
    }
    let mut out = ReportBuilder::new("max-decrease", SLACK);
    for (k, w) in trace.records().windows(2).enumerate() {
        let rhs = w[0].objective - w[0].grad_norm * w[0].grad_norm / (2.0 * lipschitz);
        out.check(k, "decrease", w[1].objective, rhs);
    }
    Ok(out.finish())
}

/// `f(x_n) − f(x*) ≤ L‖x_0 − x*‖²/2n` for every `n ≥ 1`.
pub fn check_sublinear_gd(p: &LassoProblem, trace: &IterationTrace, x_star: &[f64]) -> Result<BoundReport> {
    require_len(trace, 2)?;
    check_square(p, x_star)?;
    let lipschitz = analytic_lipschitz(p)?;
    for s in trace.steps() {
        check_step(s, lipschitz)?;
    }
    let r0 = distance(&iterates(p, trace)?[0], x_star).powi(2);
    let f_star = objective_at(p, x_star)?;
    let mut out = ReportBuilder::new("gd-sublinear", SLACK);
    for (n, rec) in trace.records().iter().enumerate().skip(1) {
        out.check(n, "value", rec.objective - f_star, lipschitz * r0 / (2.0 * n as f64));
    }
    Ok(out.finish())
}

/// Geometric contraction for strongly convex `f`:
/// `‖x_{k+1} − x*‖² ≤ (1 − μ/L)‖x_k − x*‖²` and
/// `f(x_n) − f(x*) ≤ (L/2)(1 − μ/L)ⁿ‖x_0 − x*‖²`.
pub fn check_geometric_gd(
    p: &LassoProblem,
    trace: &IterationTrace,
    x_star: &[f64],
    mu: &StrongConvexityEstimate,
) -> Result<BoundReport> {
    if !mu.valid {
        return Err(Error::NotStronglyConvex { mu: mu.mu });
    }
    require_len(trace, 2)?;
    check_square(p, x_star)?;
    let lipschitz = analytic_lipschitz(p)?;
    for s in trace.steps() {
        check_step(s, lipschitz)?;
    }
    let q = (1.0 - mu.mu / lipschitz).max(0.0);
    let xs = iterates(p, trace)?;
    let dist2: Vec<f64> = xs.iter().map(|x| distance(x, x_star).powi(2)).collect();
    let f_star = objective_at(p, x_star)?;

    let mut out = ReportBuilder::new("gd-geometric", SLACK);
    for (k, w) in dist2.windows(2).enumerate() {
        out.check(k, "distance", w[1], q * w[0]);
    }
    for (n, rec) in trace.records().iter().enumerate() {
        let rhs = 0.5 * lipschitz * q.powi(n as i32) * dist2[0];
        out.check(n, "value", rec.objective - f_star, rhs);
    }
    Ok(out.finish())
}

/// `F(x_{k+1}) ≤ F(z) − G_λ(x_k)ᵀ(z − x_k) − ‖x_{k+1} − x_k‖²/2λ` for every
/// consecutive pair and every `z`, with `z = x_k` always included.
pub fn check_prox_descent_lemma(
    p: &LassoProblem,
    trace: &IterationTrace,
    z_samples: &[Vector],
) -> Result<BoundReport> {
    require_len(trace, 2)?;
    let lipschitz = analytic_lipschitz(p)?;
    let xs = iterates(p, trace)?;
    if let Some(z) = z_samples.iter().find(|z| z.len() != p.d()) {
        return Err(Error::dims("z sample", p.d(), z.len()));
    }
    let mut z_values = Vec::with_capacity(z_samples.len());
    for z in z_samples {
        z_values.push(objective_at(p, z)?);
    }

    let mut out = ReportBuilder::new("prox-lemma", SLACK);
    for (k, (w, rec)) in xs.windows(2).zip(trace.records()).enumerate() {
        let step = rec.step;
        check_step(step, lipschitz)?;
        let (x, x_next) = (&w[0], &w[1]);
        let g = generalized_gradient_from(x, x_next, step);
        let move2 = distance(x_next, x).powi(2) / (2.0 * step);
        let lhs = objective_at(p, x_next)?;
        let own = objective_at(p, x)?;
        out.check(k, "z=x_k", lhs, own - move2);
        for (j, (z, fz)) in z_samples.iter().zip(&z_values).enumerate() {
            let rhs = fz - g.dot(&z.sub(x)) - move2;
            out.check(k, &format!("z[{j}]"), lhs, rhs);
        }
    }
    Ok(out.finish())
}

/// `F(x_n) − F(x*) ≤ ‖x_0 − x*‖²/2nλ` for every `n ≥ 1` of a constant-step
/// trace.
pub fn check_sublinear_prox(p: &LassoProblem, trace: &IterationTrace, x_star: &[f64]) -> Result<BoundReport> {
    require_len(trace, 2)?;
    check_square(p, x_star)?;
    let step = constant_step(trace, analytic_lipschitz(p)?)?;
    let r0 = distance(&iterates(p, trace)?[0], x_star).powi(2);
    let f_star = objective_at(p, x_star)?;
    let mut out = ReportBuilder::new("prox-sublinear", SLACK);
    for (n, rec) in trace.records().iter().enumerate().skip(1) {
        out.check(n, "value", rec.objective - f_star, r0 / (2.0 * n as f64 * step));
    }
    Ok(out.finish())
}

/// `F(x_k) − F* ≤ (1 + λμ/4)^{−k}(F(x_0) − F*)` at every `k`, plus the
/// one-step form `F(x_{k+1}) − F* ≤ (F(x_k) − F*)/(1 + λμ/4)`.
pub fn check_exponential_prox(
    p: &LassoProblem,
    trace: &IterationTrace,
    f_star: f64,
    mu: &StrongConvexityEstimate,
) -> Result<BoundReport> {
    if !mu.valid {
        return Err(Error::NotStronglyConvex { mu: mu.mu });
    }
    require_len(trace, 1)?;
    let step = constant_step(trace, analytic_lipschitz(p)?)?;
    let rate = 1.0 / (1.0 + step * mu.mu / 4.0);
    let gap: Vec<f64> = trace.objectives().map(|f| f - f_star).collect();

    let mut out = ReportBuilder::new("prox-exponential", SLACK + 10.0 * f_star.abs() * 1e-12);
    for (k, g) in gap.iter().enumerate() {
        out.check(k, "cumulative", *g, rate.powi(k as i32) * gap[0]);
    }
    for (k, w) in gap.windows(2).enumerate() {
        out.check(k, "per-step", w[1], rate * w[0]);
    }
    Ok(out.finish())
}
