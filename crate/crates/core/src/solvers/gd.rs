use std::time::Instant;

use super::{check_stop, ensure_finite, Recorder, SolverConfig, StepOutcome, StopRules};
use crate::error::{Error, Result};
use crate::objective::LassoProblem;
use crate::trace::{SolveResult, TraceRecord};

/// Gradient descent `x_{k+1} = x_k − ∇f(x_k)/L` on the smooth least-squares
/// part. The problem must have `alpha = 0`.
pub fn gd_solve(p: &LassoProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    run(p, cfg, None)
}

pub(super) fn run(
    p: &LassoProblem,
    cfg: &SolverConfig,
    observer: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<SolveResult> {
    if p.alpha() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gradient descent needs alpha = 0, got {}",
            p.alpha()
        )));
    }
    cfg.validate()?;
    let started = Instant::now();
    let lipschitz = p.lipschitz(cfg.lipschitz_mode)?;
    let step = 1.0 / lipschitz;
    let rules = StopRules {
        monotone: false,
        ..cfg.stop_rules()
    };
    let mut recorder = Recorder::new(cfg, started, observer);

    let mut x = cfg.start_point(p.d())?;
    let mut eval = p.evaluate(&x)?;
    ensure_finite(eval.smooth, "objective", 0)?;
    let mut grad_norm = eval.gradient.norm2();

    for k in 0.. {
        recorder.record(k, eval.smooth, grad_norm, step, &x)?;
        let x_next = x.add_scaled(-step, &eval.gradient);
        let eval_next = p.evaluate(&x_next)?;
        ensure_finite(eval_next.smooth, "objective", k)?;
        let next_grad_norm = eval_next.gradient.norm2();
        ensure_finite(next_grad_norm, "gradient", k)?;

        let outcome = StepOutcome {
            k,
            objective: eval.smooth,
            next_objective: eval_next.smooth,
            next_grad_norm,
        };
        if let Some(reason) = check_stop(&outcome, &rules) {
            return Ok(SolveResult {
                final_objective: eval_next.smooth,
                final_x: x_next,
                final_grad_norm: next_grad_norm,
                iterations: k + 1,
                stop_reason: reason,
                lipschitz: Some(lipschitz),
                trace: recorder.finish(),
            });
        }
        x = x_next;
        eval = eval_next;
        grad_norm = next_grad_norm;
    }
    unreachable!("the iteration budget always stops the loop")
}
