use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{check_stop, ensure_finite, Recorder, SolverConfig, StepOutcome, StopRules};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::objective::LassoProblem;
use crate::trace::{SolveResult, TraceRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamConfig {
    pub step: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            step: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.step > 0.0
            && self.epsilon > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid Adam configuration {self:?}")))
        }
    }
}

/// Moment estimates of an Adam run.
#[derive(Clone, Debug)]
pub struct AdamL1State {
    cfg: AdamConfig,
    first: Vector,
    second: Vector,
    t: i32,
}

impl AdamL1State {
    pub fn new(cfg: AdamConfig, d: usize) -> Result<Self> {
        cfg.validate()?;
        Ok(AdamL1State {
            cfg,
            first: Vector::zeros(d),
            second: Vector::zeros(d),
            t: 0,
        })
    }

    pub fn first_moment(&self) -> &Vector {
        &self.first
    }

    pub fn second_moment(&self) -> &Vector {
        &self.second
    }

    /// Applies one bias-corrected update to `x` along the direction `grad`.
    pub fn step(&mut self, x: &[f64], grad: &[f64]) -> Vector {
        self.t += 1;
        let AdamConfig {
            step,
            beta1,
            beta2,
            epsilon,
        } = self.cfg;
        let c1 = 1.0 - beta1.powi(self.t);
        let c2 = 1.0 - beta2.powi(self.t);
        x.iter()
            .zip(grad)
            .zip(self.first.iter_mut().zip(self.second.iter_mut()))
            .map(|((xi, gi), (m, v))| {
                *m = beta1 * *m + (1.0 - beta1) * gi;
                *v = beta2 * *v + (1.0 - beta2) * gi * gi;
                xi - step * (*m / c1) / ((*v / c2).sqrt() + epsilon)
            })
            .collect()
    }
}

/// Adam on the composite subgradient `∇f(x) + α·sgn(x)`. Never applies the
/// non-monotone stop.
pub fn adam_l1_solve(p: &LassoProblem, cfg: &SolverConfig, acfg: &AdamConfig) -> Result<SolveResult> {
    run(p, cfg, acfg, None)
}

pub(super) fn run(
    p: &LassoProblem,
    cfg: &SolverConfig,
    acfg: &AdamConfig,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    cfg.validate()?;
    let started = Instant::now();
    let mut state = AdamL1State::new(acfg.clone(), p.d())?;
    let rules = StopRules {
        monotone: false,
        ..cfg.stop_rules()
    };
    let mut recorder = Recorder::new(cfg, started, observer);

    let mut x = cfg.start_point(p.d())?;
    let mut eval = p.evaluate(&x)?;
    let mut objective = eval.smooth + p.reg_value(&x);
    ensure_finite(objective, "objective", 0)?;
    let mut grad_norm = eval.gradient.norm2();

    for k in 0.. {
        recorder.record(k, objective, grad_norm, acfg.step, &x)?;
        let direction = eval.gradient.add_scaled(1.0, &p.l1_subgradient(&x));
        let x_next = state.step(&x, &direction);
        let eval_next = p.evaluate(&x_next)?;
        let next_objective = eval_next.smooth + p.reg_value(&x_next);
        ensure_finite(next_objective, "objective", k)?;
        let next_grad_norm = eval_next.gradient.norm2();
        ensure_finite(next_grad_norm, "gradient", k)?;

        let outcome = StepOutcome {
            k,
            objective,
            next_objective,
            next_grad_norm,
        };
        if let Some(reason) = check_stop(&outcome, &rules) {
            return Ok(SolveResult {
                final_x: x_next,
                final_objective: next_objective,
                final_grad_norm: next_grad_norm,
                iterations: k + 1,
                stop_reason: reason,
                lipschitz: None,
                trace: recorder.finish(),
            });
        }
        x = x_next;
        eval = eval_next;
        objective = next_objective;
        grad_norm = next_grad_norm;
    }
    unreachable!("the iteration budget always stops the loop")
}
