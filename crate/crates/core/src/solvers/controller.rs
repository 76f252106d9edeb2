use crate::error::{Error, Result};
use crate::linalg::distance;

/// Variable step-size rule driven by a local Lipschitz estimate.
///
/// After each step the controller compares `λ_k‖Δg‖` with `μ0‖Δx‖`. When the
/// current step is too close to (or above) the local ratio `‖Δx‖ / ‖Δg‖` it
/// is reset to `μ1` times that ratio; otherwise it grows by
/// `min(λ_k, 1)·η_k` with `η_k = eta_rho^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepController {
    lambda: f64,
    mu0: f64,
    mu1: f64,
    eta_rho: f64,
    k: usize,
}

/// Which branch the last update took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepUpdate {
    Shrink,
    Grow,
}

impl StepController {
    pub fn new(lambda0: f64, mu0: f64, mu1: f64, eta_rho: f64) -> Result<Self> {
        if !(lambda0 > 0.0) || !lambda0.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda0 {lambda0} must be > 0")));
        }
        if !(0.0 < mu1 && mu1 < mu0 && mu0 < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < mu1 < mu0 < 1, got mu0 = {mu0}, mu1 = {mu1}"
            )));
        }
        if !(0.0 < eta_rho && eta_rho < 1.0) {
            return Err(Error::InvalidArgument(format!("eta_rho {eta_rho} must be in (0, 1)")));
        }
        Ok(StepController {
            lambda: lambda0,
            mu0,
            mu1,
            eta_rho,
            k: 0,
        })
    }

    pub fn current(&self) -> f64 {
        self.lambda
    }

    /// Number of updates applied so far.
    pub fn iteration(&self) -> usize {
        self.k
    }

    /// Growth weight `η_k` for the next update.
    pub fn eta(&self) -> f64 {
        self.eta_rho.powi(self.k as i32)
    }

    /// Updates `λ` from the last pair of iterates and gradients and returns
    /// the new step.
    pub fn update(&mut self, x_prev: &[f64], x_next: &[f64], g_prev: &[f64], g_next: &[f64]) -> f64 {
        self.update_from_norms(distance(x_next, x_prev), distance(g_next, g_prev))
            .0
    }

    /// Same as [`update`](Self::update) given `‖Δx‖` and `‖Δg‖` directly.
    pub fn update_from_norms(&mut self, dx: f64, dg: f64) -> (f64, StepUpdate) {
        // cross-multiplied form of λ > μ0‖Δx‖/‖Δg‖; dx > 0 keeps the new step positive
        let branch = if self.lambda * dg > self.mu0 * dx && dx > 0.0 {
            self.lambda = self.mu1 * dx / dg;
            StepUpdate::Shrink
        } else {
            self.lambda += self.lambda.min(1.0) * self.eta();
            StepUpdate::Grow
        };
        self.k += 1;
        (self.lambda, branch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrink_branch() {
        let mut c = StepController::new(0.1, 0.99, 0.95, 0.99).unwrap();
        let (lambda, branch) = c.update_from_norms(0.1, 2.0);
        assert_eq!(branch, StepUpdate::Shrink);
        assert!((lambda - 0.0475).abs() < 1e-15);
        assert_eq!(c.iteration(), 1);
    }

    #[test]
    fn grow_branch_uses_eta_zero() {
        let mut c = StepController::new(0.1, 0.99, 0.95, 0.99).unwrap();
        let (lambda, branch) = c.update_from_norms(0.1, 0.5);
        assert_eq!(branch, StepUpdate::Grow);
        assert!((lambda - 0.2).abs() < 1e-15);
        // η_1 = 0.99
        let (lambda, _) = c.update_from_norms(1.0, 0.0);
        assert!((lambda - (0.2 + 0.2 * 0.99)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pair_grows() {
        let mut c = StepController::new(0.3, 0.99, 0.95, 0.5).unwrap();
        let lambda = c.update(&[1.0, 2.0], &[1.0, 2.0], &[0.5, 0.5], &[0.5, 0.5]);
        assert!((lambda - 0.6).abs() < 1e-15);
    }

    #[test]
    fn growth_is_capped_above_one() {
        let mut c = StepController::new(3.0, 0.99, 0.95, 0.5).unwrap();
        let (lambda, _) = c.update_from_norms(1.0, 0.0);
        assert_eq!(lambda, 4.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StepController::new(0.0, 0.99, 0.95, 0.7).is_err());
        assert!(StepController::new(0.1, 0.95, 0.99, 0.7).is_err());
        assert!(StepController::new(0.1, 1.0, 0.95, 0.7).is_err());
        assert!(StepController::new(0.1, 0.99, 0.95, 1.0).is_err());
    }
}
