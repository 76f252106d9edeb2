//! Soft-thresholding and the proximal gradient step for `g = α‖·‖₁`.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::objective::LassoProblem;

/// `sgn(z_i) · max(|z_i| − θ, 0)` componentwise. Coordinates with
/// `|z_i| ≤ θ` are written as an exact `0.0`.
pub fn soft_threshold(z: &[f64], theta: f64) -> Result<Vector> {
    if !(theta >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold {theta} must be >= 0")));
    }
    Ok(z.iter().map(|&v| shrink(v, theta)).collect())
}

#[inline]
pub(crate) fn shrink(v: f64, theta: f64) -> f64 {
    if v > theta {
        v - theta
    } else if v < -theta {
        v + theta
    } else {
        0.0
    }
}

/// `prox_λ(x − λ∇f(x))`, one step of proximal gradient descent.
pub fn prox_step(p: &LassoProblem, x: &[f64], lambda: f64) -> Result<Vector> {
    let grad = p.smooth_gradient(x)?;
    prox_step_with_gradient(p, x, &grad, lambda)
}

/// [`prox_step`] with a precomputed `∇f(x)`.
pub fn prox_step_with_gradient(
    p: &LassoProblem,
    x: &[f64],
    grad: &[f64],
    lambda: f64,
) -> Result<Vector> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("step {lambda} must be > 0")));
    }
    if x.len() != p.d() || grad.len() != p.d() {
        return Err(Error::dims("prox_step", p.d(), x.len().min(grad.len())));
    }
    let theta = p.alpha() * lambda;
    Ok(x
        .iter()
        .zip(grad)
        .map(|(xi, gi)| shrink(xi - lambda * gi, theta))
        .collect())
}

/// `G_λ(x) = (x − prox_step(x, λ)) / λ`.
pub fn generalized_gradient(p: &LassoProblem, x: &[f64], lambda: f64) -> Result<Vector> {
    let next = prox_step(p, x, lambda)?;
    Ok(generalized_gradient_from(x, &next, lambda))
}

/// `(x − x_next) / λ` for an already computed step.
pub fn generalized_gradient_from(x: &[f64], x_next: &[f64], lambda: f64) -> Vector {
    x.iter().zip(x_next).map(|(xi, n)| (xi - n) / lambda).collect()
}
