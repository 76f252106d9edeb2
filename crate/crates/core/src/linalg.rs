//! Dense row-major vectors and matrices.
//!
//! Only what the solvers and data generators need: products, norms, a Cholesky
//! factorization and power iteration for extreme eigenvalues of symmetric
//! positive semidefinite matrices.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn zeros(len: usize) -> Self {
        Vector(vec![0.0; len])
    }

    pub fn filled(len: usize, value: f64) -> Self {
        Vector(vec![value; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn norm2(&self) -> f64 {
        norm2(self)
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(self, other)
    }

    /// `self - other`, elementwise.
    pub fn sub(&self, other: &[f64]) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        self.iter().map(|v| v * factor).collect()
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &[f64]) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(a, b)| a + factor * b).collect()
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl FromIterator<f64> for Vector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

/// Inner product with four independent accumulators. The summation order is
/// fixed, so results are bit-reproducible.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        acc[0] += ca[0] * cb[0];
        acc[1] += ca[1] * cb[1];
        acc[2] += ca[2] * cb[2];
        acc[3] += ca[3] * cb[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Euclidean distance `‖a − b‖`.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("Matrix::new", rows * cols, data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::dims("Matrix::from_rows", cols, r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter().enumerate() {
                t.data[j * self.rows + i] = *v;
            }
        }
        t
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::dims("matvec", self.cols, x.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `Aᵀ y`, accumulated row by row so `A` is read contiguously.
    pub fn matvec_transpose(&self, y: &[f64]) -> Result<Vector> {
        if y.len() != self.rows {
            return Err(Error::dims("matvec_transpose", self.rows, y.len()));
        }
        let mut out = Vector::zeros(self.cols);
        for (i, yi) in y.iter().enumerate() {
            if *yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
        Ok(out)
    }

    /// `scale · AᵀA`, exploiting symmetry.
    pub fn gram(&self, scale: f64) -> Matrix {
        let cols = self.transpose();
        let d = self.cols;
        let mut g = Matrix::zeros(d, d);
        for j in 0..d {
            let cj = cols.row(j);
            for k in j..d {
                let v = scale * dot(cj, cols.row(k));
                g.data[j * d + k] = v;
                g.data[k * d + j] = v;
            }
        }
        g
    }

    /// Largest `|a_ij − b_ij|`; `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// `A Bᵀ` for row-major `A` (n×k) and `B` (m×k).
    pub fn mul_transpose(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::dims("mul_transpose", self.cols, other.cols));
        }
        let mut out = Matrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out.data[i * other.rows + j] = dot(self.row(i), other.row(j));
            }
        }
        Ok(out)
    }
}

/// Lower-triangular `Q` with `Q Qᵀ = M` for a symmetric positive definite `M`.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    if m.rows != m.cols {
        return Err(Error::dims("cholesky", m.rows, m.cols));
    }
    let n = m.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let row_j = &l.data[j * n..j * n + j];
        let pivot = m.get(j, j) - dot(row_j, row_j);
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: pivot });
        }
        let ljj = pivot.sqrt();
        l.data[j * n + j] = ljj;
        for i in j + 1..n {
            let s = dot(&l.data[i * n..i * n + j], &l.data[j * n..j * n + j]);
            l.data[i * n + j] = (m.get(i, j) - s) / ljj;
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = rhs` given the lower Cholesky factor `L`.
pub fn cholesky_solve(l: &Matrix, rhs: &[f64]) -> Vector {
    let n = l.rows;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s = dot(&l.data[i * n..i * n + i], &y[..i]);
        y[i] = (rhs[i] - s) / l.data[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = 0.0;
        for k in i + 1..n {
            s += l.data[k * n + i] * x[k];
        }
        x[i] = (y[i] - s) / l.data[i * n + i];
    }
    Vector(x)
}

/// Start vector for power iteration: all ones with a small deterministic
/// ramp so it cannot be exactly orthogonal to a dominant eigenvector such as
/// `(1, −1)`.
fn power_start(n: usize) -> Vector {
    let mut v: Vector = (0..n)
        .map(|i| 1.0 + 0.01 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        .collect();
    let norm = v.norm2();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration. Stops when the Rayleigh quotient changes by at most `tol`
/// relative.
pub fn dominant_eigenvalue(m: &Matrix, tol: f64, max_iters: usize) -> Result<f64> {
    iterate_rayleigh(m.rows, tol, max_iters, |v| m.matvec(v).expect("square"))
}

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// power iteration on its Cholesky factor.
pub fn smallest_eigenvalue(m: &Matrix, tol: f64, max_iters: usize) -> Result<f64> {
    let l = cholesky(m)?;
    let inv = iterate_rayleigh(m.rows, tol, max_iters, |v| cholesky_solve(&l, v))?;
    Ok(1.0 / inv)
}

fn iterate_rayleigh(
    n: usize,
    tol: f64,
    max_iters: usize,
    mut apply: impl FnMut(&[f64]) -> Vector,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("eigenvalue of an empty matrix".into()));
    }
    let mut v = power_start(n);
    let mut previous = f64::NAN;
    let mut estimate = 0.0;
    for _ in 0..max_iters {
        let w = apply(&v);
        estimate = v.dot(&w);
        let norm = w.norm2();
        if norm == 0.0 {
            return Ok(0.0);
        }
        if !norm.is_finite() {
            return Err(Error::NonFinite {
                what: "power iterate",
                iteration: 0,
            });
        }
        v = w.scaled(1.0 / norm);
        if (estimate - previous).abs() <= tol * estimate.abs() {
            return Ok(estimate);
        }
        previous = estimate;
    }
    Err(Error::NotConverged {
        iterations: max_iters,
        estimate,
    })
}
