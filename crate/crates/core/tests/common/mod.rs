#![allow(dead_code)]

use proptest::prelude::*;
use proxkit::{LassoProblem, Matrix, Vector};

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Independent of the power-iteration code under test.
pub fn jacobi_eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `AᵀA/m` computed entry by entry.
pub fn naive_hessian(a: &Matrix) -> Matrix {
    let (m, d) = (a.rows(), a.cols());
    let mut h = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let s: f64 = (0..m).map(|r| a.get(r, i) * a.get(r, j)).sum();
            h.set(i, j, s / m as f64);
        }
    }
    h
}

pub fn vec_strategy(len: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3.0..3.0f64, len).prop_map(Vector::from)
}

pub fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0..2.0f64, rows * cols).prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
}

/// A random problem with `d ≤ 8`, `m ≤ 30` and a point of matching length.
pub fn problem_and_point() -> impl Strategy<Value = (LassoProblem, Vector)> {
    (1usize..=8, 1usize..=30, 0.0..0.5f64).prop_flat_map(|(d, m, alpha)| {
        (matrix_strategy(m, d), vec_strategy(m), vec_strategy(d)).prop_filter_map(
            "zero design",
            move |(a, b, x)| {
                let p = LassoProblem::new(a, b, alpha).ok()?;
                p.hessian().as_slice().iter().any(|&v| v != 0.0).then_some((p, x))
            },
        )
    })
}
