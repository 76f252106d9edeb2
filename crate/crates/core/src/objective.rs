//! ℓ1-regularized least squares:
//! `F(x) = f(x) + g(x)` with `f(x) = ‖Ax − b‖² / 2m` and `g(x) = α‖x‖₁`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dominant_eigenvalue, Matrix, Vector};

/// Relative eigenvalue change at which power iteration stops.
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 5_000;

/// Which constant the solvers call `L`.
///
/// `Paper` is `λ_max(AᵀA / 2m)`, the value used for the benchmark step
/// `1/L`. `Analytic` is `λ_max(AᵀA / m)`, the true Lipschitz constant of
/// `∇f`, twice the former. Convergence bounds only hold for the latter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LipschitzMode {
    #[default]
    Paper,
    Analytic,
}

impl std::str::FromStr for LipschitzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(LipschitzMode::Paper),
            "analytic" => Ok(LipschitzMode::Analytic),
            other => Err(Error::InvalidArgument(format!("unknown lipschitz mode {other:?}"))),
        }
    }
}

#[derive(Debug)]
struct Design {
    a: Matrix,
    b: Vector,
    /// `AᵀA / m`
    gram: Matrix,
    /// `Aᵀb / m`
    atb: Vector,
    /// `bᵀb / 2m`
    half_mean_b2: f64,
}

/// Smooth part and its gradient at one point.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub smooth: f64,
    pub gradient: Vector,
}

/// Design matrix, targets and regularization weight. Cloning is cheap: the
/// data and its normal-equation summary are shared.
#[derive(Clone, Debug)]
pub struct LassoProblem {
    design: Arc<Design>,
    alpha: f64,
}

impl LassoProblem {
    /// `alpha = 0` gives plain least squares.
    pub fn new(a: Matrix, b: Vector, alpha: f64) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::dims("LassoProblem::new", a.rows(), b.len()));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidArgument("design matrix is empty".into()));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument("design or targets contain NaN/Inf".into()));
        }
        check_alpha(alpha)?;
        let m = a.rows() as f64;
        let gram = a.gram(1.0 / m);
        let atb = a.matvec_transpose(&b)?.scaled(1.0 / m);
        let half_mean_b2 = b.dot(&b) / (2.0 * m);
        Ok(LassoProblem {
            design: Arc::new(Design {
                a,
                b,
                gram,
                atb,
                half_mean_b2,
            }),
            alpha,
        })
    }

    /// Same data, different regularization weight.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(LassoProblem {
            design: Arc::clone(&self.design),
            alpha,
        })
    }

    pub fn a(&self) -> &Matrix {
        &self.design.a
    }

    pub fn b(&self) -> &Vector {
        &self.design.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Sample count.
    pub fn m(&self) -> usize {
        self.design.a.rows()
    }

    /// Number of features.
    pub fn d(&self) -> usize {
        self.design.a.cols()
    }

    /// `AᵀA / m`, the Hessian of `f`.
    pub fn hessian(&self) -> &Matrix {
        &self.design.gram
    }

    fn check_dim(&self, op: &'static str, x: &[f64]) -> Result<()> {
        if x.len() != self.d() {
            return Err(Error::dims(op, self.d(), x.len()));
        }
        Ok(())
    }

    /// `‖Ax − b‖² / 2m`, evaluated on the residual.
    pub fn smooth_value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim("smooth_value", x)?;
        let r = self.design.a.matvec(x)?.sub(&self.design.b);
        Ok(r.dot(&r) / (2.0 * self.m() as f64))
    }

    /// `Aᵀ(Ax − b) / m`.
    pub fn smooth_gradient(&self, x: &[f64]) -> Result<Vector> {
        self.check_dim("smooth_gradient", x)?;
        Ok(self.design.gram.matvec(x)?.sub(&self.design.atb))
    }

    /// `f(x)` and `∇f(x)` from the normal equations, `O(d²)` per call.
    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        self.check_dim("evaluate", x)?;
        let gx = self.design.gram.matvec(x)?;
        let smooth = 0.5 * gx.dot(x) - self.design.atb.dot(x) + self.design.half_mean_b2;
        // cancellation can leave a tiny negative value at an exact fit
        let smooth = smooth.max(0.0);
        Ok(Evaluation {
            smooth,
            gradient: gx.sub(&self.design.atb),
        })
    }

    /// `α‖x‖₁`.
    pub fn reg_value(&self, x: &[f64]) -> f64 {
        self.alpha * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn composite_value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.smooth_value(x)? + self.reg_value(x))
    }

    /// The element `α·sgn(x)` of `∂g(x)`, with `sgn(0) = 0`.
    pub fn l1_subgradient(&self, x: &[f64]) -> Vector {
        x.iter()
            .map(|&v| {
                if v > 0.0 {
                    self.alpha
                } else if v < 0.0 {
                    -self.alpha
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// `λ_max(AᵀA / 2m)` by power iteration.
    pub fn lipschitz_constant(&self, tol: f64, max_power_iters: usize) -> Result<f64> {
        Ok(0.5 * self.hessian_top_eigenvalue(tol, max_power_iters)?)
    }

    /// `L` under the given convention, with the default power-iteration settings.
    pub fn lipschitz(&self, mode: LipschitzMode) -> Result<f64> {
        let top = self.hessian_top_eigenvalue(POWER_TOL, POWER_MAX_ITERS)?;
        Ok(match mode {
            LipschitzMode::Paper => 0.5 * top,
            LipschitzMode::Analytic => top,
        })
    }

    fn hessian_top_eigenvalue(&self, tol: f64, max_iters: usize) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("power tolerance {tol} must be > 0")));
        }
        let top = dominant_eigenvalue(&self.design.gram, tol, max_iters)?;
        if !(top > 0.0) {
            return Err(Error::InvalidArgument("design matrix is zero".into()));
        }
        Ok(top)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be finite and >= 0")));
    }
    Ok(())
}
