use std::time::Instant;

use super::{check_stop, ensure_finite, Recorder, SolverConfig, StepController, StepOutcome};
use crate::error::Result;
use crate::objective::LassoProblem;
use crate::prox::prox_step_with_gradient;
use crate::trace::{SolveResult, StopReason, TraceRecord};

/// Proximal gradient descent with the constant step `λ = 1/L`, `L` taken
/// under `cfg.lipschitz_mode`.
pub fn prox_gd_constant_solve(p: &LassoProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    run_constant(p, cfg, None)
}

/// Proximal gradient descent with steps from a [`StepController`].
///
/// `L` is still computed (and reported) so timings are comparable with the
/// constant-step method; it does not influence the iterates.
pub fn prox_gd_variable_solve(p: &LassoProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    run_variable(p, cfg, None)
}

enum Schedule {
    Constant(f64),
    Variable(StepController),
}

impl Schedule {
    fn current(&self) -> f64 {
        match self {
            Schedule::Constant(step) => *step,
            Schedule::Variable(c) => c.current(),
        }
    }
}

pub(super) fn run_constant(
    p: &LassoProblem,
    cfg: &SolverConfig,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    cfg.validate()?;
    let started = Instant::now();
    let lipschitz = p.lipschitz(cfg.lipschitz_mode)?;
    run(p, cfg, Schedule::Constant(1.0 / lipschitz), lipschitz, started, observer)
}

pub(super) fn run_variable(
    p: &LassoProblem,
    cfg: &SolverConfig,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    cfg.validate()?;
    let started = Instant::now();
    let lipschitz = p.lipschitz(cfg.lipschitz_mode)?;
    let controller = StepController::new(cfg.lambda0, cfg.mu0, cfg.mu1, cfg.eta_rho)?;
    run(p, cfg, Schedule::Variable(controller), lipschitz, started, observer)
}

fn run(
    p: &LassoProblem,
    cfg: &SolverConfig,
    mut schedule: Schedule,
    lipschitz: f64,
    started: Instant,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    let rules = cfg.stop_rules();
    let mut recorder = Recorder::new(cfg, started, observer);

    let mut x = cfg.start_point(p.d())?;
    let mut eval = p.evaluate(&x)?;
    let mut objective = eval.smooth + p.reg_value(&x);
    ensure_finite(objective, "objective", 0)?;
    let mut grad_norm = eval.gradient.norm2();

    for k in 0.. {
        let step = schedule.current();
        recorder.record(k, objective, grad_norm, step, &x)?;

        let x_next = prox_step_with_gradient(p, &x, &eval.gradient, step)?;
        let eval_next = p.evaluate(&x_next)?;
        let next_objective = eval_next.smooth + p.reg_value(&x_next);
        ensure_finite(next_objective, "objective", k)?;
        let next_grad_norm = eval_next.gradient.norm2();
        ensure_finite(next_grad_norm, "gradient", k)?;

        if let Schedule::Variable(controller) = &mut schedule {
            controller.update(&x, &x_next, &eval.gradient, &eval_next.gradient);
        }

        let outcome = StepOutcome {
            k,
            objective,
            next_objective,
            next_grad_norm,
        };
        if let Some(reason) = check_stop(&outcome, &rules) {
            let (final_x, final_objective, final_grad_norm) = match reason {
                // keep the better iterate
                StopReason::NonMonotone => (x, objective, grad_norm),
                _ => (x_next, next_objective, next_grad_norm),
            };
            return Ok(SolveResult {
                final_x,
                final_objective,
                final_grad_norm,
                iterations: k + 1,
                stop_reason: reason,
                lipschitz: Some(lipschitz),
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
