use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{
    check_exponential_prox, check_geometric_gd, check_max_decrease, check_prox_descent_lemma, check_sublinear_gd,
    check_sublinear_prox, estimate_strong_convexity, BoundReport,
};
use crate::data::{generate_synthetic, stream_rng, SyntheticSpec};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::objective::{LassoProblem, LipschitzMode};
use crate::solvers::{gd_solve, prox_gd_constant_solve, SolverConfig};
use crate::trace::SolveResult;

/// First RNG stream used for verification instances; instance `i` uses
/// `INSTANCE_STREAM + i`.
const INSTANCE_STREAM: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    MaxDecrease,
    GdSublinear,
    GdGeometric,
    ProxLemma,
    ProxSublinear,
    ProxExponential,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::MaxDecrease,
        CheckKind::GdSublinear,
        CheckKind::GdGeometric,
        CheckKind::ProxLemma,
        CheckKind::ProxSublinear,
        CheckKind::ProxExponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::MaxDecrease => "max-decrease",
            CheckKind::GdSublinear => "gd-sublinear",
            CheckKind::GdGeometric => "gd-geometric",
            CheckKind::ProxLemma => "prox-lemma",
            CheckKind::ProxSublinear => "prox-sublinear",
            CheckKind::ProxExponential => "prox-exponential",
        }
    }

    fn needs_gd(self) -> bool {
        matches!(self, CheckKind::MaxDecrease | CheckKind::GdSublinear | CheckKind::GdGeometric)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Iterations of the runs under test.
    pub max_iters: usize,
    /// The reference solution gets `oracle_factor · max_iters` iterations.
    pub oracle_factor: usize,
    /// Random `z` points per pair in the descent-lemma check.
    pub z_samples: usize,
    /// Seeds starting points and `z` samples.
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_iters: 200,
            oracle_factor: 100,
            z_samples: 20,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub instance: String,
    pub check: CheckKind,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
}

impl CheckOutcome {
    fn from_report(instance: &str, check: CheckKind, report: BoundReport) -> Self {
        CheckOutcome {
            instance: instance.to_string(),
            check,
            status: if report.passed { CheckStatus::Passed } else { CheckStatus::Failed },
            reason: None,
            report: Some(report),
        }
    }

    fn skipped(instance: &str, check: CheckKind, reason: String) -> Self {
        CheckOutcome {
            instance: instance.to_string(),
            check,
            status: CheckStatus::Skipped,
            reason: Some(reason),
            report: None,
        }
    }
}

/// A long, tight run of the same solver family under the analytic step:
/// plain gradient descent when `alpha = 0`, constant-step proximal gradient
/// otherwise.
pub fn reference_solution(p: &LassoProblem, iterations: usize) -> Result<SolveResult> {
    let cfg = SolverConfig {
        max_iters: iterations,
        grad_tol: 1e-10,
        monotone_stop: false,
        lipschitz_mode: LipschitzMode::Analytic,
        ..SolverConfig::default()
    };
    if p.alpha() == 0.0 {
        gd_solve(p, &cfg)
    } else {
        prox_gd_constant_solve(p, &cfg)
    }
}

/// Runs compliant configurations on `p` and evaluates `checks`. Gradient
/// descent checks use the same design with `alpha = 0`.
pub fn verify_problem(
    instance: &str,
    p: &LassoProblem,
    checks: &[CheckKind],
    cfg: &VerifyConfig,
) -> Result<Vec<CheckOutcome>> {
    let mu = estimate_strong_convexity(p)?;
    let mut rng = stream_rng(cfg.seed, INSTANCE_STREAM - 1);
    let x0: Vector = (0..p.d()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let run_cfg = SolverConfig {
        max_iters: cfg.max_iters,
        grad_tol: 0.0,
        monotone_stop: false,
        lipschitz_mode: LipschitzMode::Analytic,
        record_iterates: true,
        x0: Some(x0),
        ..SolverConfig::default()
    };
    let oracle_iters = cfg.max_iters.saturating_mul(cfg.oracle_factor);
    let not_strongly_convex = || format!("not strongly convex (mu = {:e})", mu.mu);

    let mut out = Vec::new();
    if checks.iter().any(|c| c.needs_gd()) {
        let smooth = p.with_alpha(0.0)?;
        let run = gd_solve(&smooth, &run_cfg)?;
        let x_star = reference_solution(&smooth, oracle_iters)?.final_x;
        for &check in checks.iter().filter(|c| c.needs_gd()) {
            let report = match check {
                CheckKind::MaxDecrease => check_max_decrease(&smooth, &run.trace)?,
                CheckKind::GdSublinear => check_sublinear_gd(&smooth, &run.trace, &x_star)?,
                _ if !mu.valid => {
                    out.push(CheckOutcome::skipped(instance, check, not_strongly_convex()));
                    continue;
                }
                _ => check_geometric_gd(&smooth, &run.trace, &x_star, &mu)?,
            };
            out.push(CheckOutcome::from_report(instance, check, report));
        }
    }
    if checks.iter().any(|c| !c.needs_gd()) {
        let run = prox_gd_constant_solve(p, &run_cfg)?;
        let oracle = reference_solution(p, oracle_iters)?;
        let scale = 1.0 + oracle.final_x.norm2();
        let mut z_samples = vec![oracle.final_x.clone()];
        for _ in 0..cfg.z_samples {
            z_samples.push((0..p.d()).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect());
        }
        for &check in checks.iter().filter(|c| !c.needs_gd()) {
            let report = match check {
                CheckKind::ProxLemma => check_prox_descent_lemma(p, &run.trace, &z_samples)?,
                CheckKind::ProxSublinear => check_sublinear_prox(p, &run.trace, &oracle.final_x)?,
                _ if !mu.valid => {
                    out.push(CheckOutcome::skipped(instance, check, not_strongly_convex()));
                    continue;
                }
                _ => check_exponential_prox(p, &run.trace, oracle.final_objective, &mu)?,
            };
            out.push(CheckOutcome::from_report(instance, check, report));
        }
    }
    // report in the requested order
    out.sort_by_key(|o| checks.iter().position(|c| *c == o.check));
    Ok(out)
}

/// Random instance `index` of the suite seeded by `seed`: `d ≤ 20`,
/// `m ≤ 500`. Every fourth instance is wide (`m < d`), the rest have
/// `m ≥ 2d`.
pub fn random_instance(seed: u64, index: usize) -> Result<(String, LassoProblem)> {
    let mut rng = stream_rng(seed, INSTANCE_STREAM + index as u64);
    let wide = index % 4 == 3;
    let (d, m) = if wide {
        let d = rng.random_range(3..=20);
        (d, rng.random_range(1..d))
    } else {
        let d = rng.random_range(2..=20);
        (d, rng.random_range(2 * d..=500))
    };
    let spec = SyntheticSpec {
        d,
        m,
        s: rng.random_range(0..=d),
        seed: rng.random(),
        rho: rng.random_range(0.0..0.8),
    };
    let alpha = 10f64.powf(rng.random_range(-3.0..-1.0));
    let p = generate_synthetic(&spec)?.problem.with_alpha(alpha)?;
    let name = format!("#{index} d={d} m={m} alpha={alpha:.4}");
    Ok((name, p))
}

/// Verifies `checks` on `count` random instances.
pub fn random_suite(seed: u64, count: usize, checks: &[CheckKind], cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for index in 0..count {
        let (name, p) = random_instance(seed, index)?;
        let instance_cfg = VerifyConfig {
            seed: seed.wrapping_add(index as u64),
            ..cfg.clone()
        };
        out.extend(verify_problem(&name, &p, checks, &instance_cfg)?);
    }
    Ok(out)
}
