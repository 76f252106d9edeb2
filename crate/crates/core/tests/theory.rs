mod common;

use common::{jacobi_eigenvalues, naive_hessian};
use proxkit::data::generate_synthetic;
use proxkit::solvers::{gd_solve, prox_gd_constant_solve};
use proxkit::theory::{
    check_exponential_prox, check_geometric_gd, check_max_decrease, check_prox_descent_lemma, check_sublinear_gd,
    check_sublinear_prox, estimate_strong_convexity, BoundReport, StrongConvexityEstimate,
};
use proxkit::{IterationTrace, LassoProblem, LipschitzMode, SolverConfig, SyntheticSpec, TraceRecord, Vector};

fn problem(alpha: f64) -> LassoProblem {
    let ds = generate_synthetic(&SyntheticSpec::new(5, 60, 2, 21)).unwrap();
    ds.problem.with_alpha(alpha).unwrap()
}

fn config(iters: usize) -> SolverConfig {
    SolverConfig {
        max_iters: iters,
        grad_tol: 0.0,
        monotone_stop: false,
        lipschitz_mode: LipschitzMode::Analytic,
        record_iterates: true,
        x0: Some(Vector::from(vec![3.0, -2.0, 1.0, 0.5, -1.5])),
        ..SolverConfig::default()
    }
}

fn gd_trace(p: &LassoProblem) -> IterationTrace {
    gd_solve(p, &config(40)).unwrap().trace
}

fn prox_trace(p: &LassoProblem) -> IterationTrace {
    prox_gd_constant_solve(p, &config(40)).unwrap().trace
}

/// Rebuilds `trace` with each (record, iterate) pair passed through `edit`.
fn mutate(trace: &IterationTrace, mut edit: impl FnMut(usize, &mut TraceRecord, &mut Vec<f64>)) -> IterationTrace {
    let mut out = IterationTrace::with_iterates();
    for (k, (rec, x)) in trace.records().iter().zip(trace.iterates().unwrap()).enumerate() {
        let mut rec = rec.clone();
        let mut x = x.clone().into_inner();
        edit(k, &mut rec, &mut x);
        out.push_with_iterate(rec, &x).unwrap();
    }
    out
}

/// Least-squares solution through the normal equations, solved by
/// Gaussian elimination with partial pivoting.
fn least_squares(p: &LassoProblem) -> Vector {
    let d = p.d();
    let h = naive_hessian(p.a());
    let rhs = p.a().matvec_transpose(p.b()).unwrap();
    let mut aug: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut row = h.row(i).to_vec();
            row.push(rhs[i] / p.m() as f64);
            row
        })
        .collect();
    for c in 0..d {
        let piv = (c..d).max_by(|&i, &j| aug[i][c].abs().total_cmp(&aug[j][c].abs())).unwrap();
        aug.swap(c, piv);
        for r in 0..d {
            if r != c {
                let f = aug[r][c] / aug[c][c];
                for k in c..=d {
                    aug[r][k] -= f * aug[c][k];
                }
            }
        }
    }
    (0..d).map(|i| aug[i][d] / aug[i][i]).collect()
}

fn lasso_optimum(p: &LassoProblem) -> (Vector, f64) {
    let cfg = SolverConfig { max_iters: 50_000, ..config(0) };
    let r = prox_gd_constant_solve(p, &cfg).unwrap();
    (r.final_x, r.final_objective)
}

fn mu(p: &LassoProblem) -> StrongConvexityEstimate {
    estimate_strong_convexity(p).unwrap()
}

fn assert_pass(r: &BoundReport) {
    assert!(r.passed, "{} should hold: {:?}", r.name, r.violations.first());
    assert!(r.checked > 0);
}

fn assert_fail(r: &BoundReport) {
    assert!(!r.passed, "{} should catch the mutation", r.name);
    assert!(!r.violations.is_empty());
}

#[test]
fn strong_convexity_matches_the_oracle() {
    let p = problem(0.0);
    let eig = jacobi_eigenvalues(&naive_hessian(p.a()));
    let est = mu(&p);
    assert!(est.valid);
    assert!((est.mu - eig[0]).abs() < 1e-8 * eig[4]);
}

#[test]
fn max_decrease() {
    let p = problem(0.0);
    let t = gd_trace(&p);
    assert_pass(&check_max_decrease(&p, &t).unwrap());
    let f0 = t.records()[0].objective;
    let bad = mutate(&t, |k, rec, _| {
        if k == 5 {
            rec.objective = f0;
        }
    });
    assert_fail(&check_max_decrease(&p, &bad).unwrap());
}

#[test]
fn sublinear_gd() {
    let p = problem(0.0);
    let t = gd_trace(&p);
    let x_star = least_squares(&p);
    assert_pass(&check_sublinear_gd(&p, &t, &x_star).unwrap());
    let bad = mutate(&t, |k, rec, _| {
        if k == 30 {
            rec.objective += 10.0;
        }
    });
    assert_fail(&check_sublinear_gd(&p, &bad, &x_star).unwrap());
}

#[test]
fn geometric_gd() {
    let p = problem(0.0);
    let t = gd_trace(&p);
    let x_star = least_squares(&p);
    let m = mu(&p);
    assert_pass(&check_geometric_gd(&p, &t, &x_star, &m).unwrap());
    // iterates that drift away from the minimizer break the contraction
    let bad = mutate(&t, |k, _, x| {
        if k >= 10 {
            x[0] += k as f64;
        }
    });
    let r = check_geometric_gd(&p, &bad, &x_star, &m).unwrap();
    assert_fail(&r);
    assert!(r.violations.iter().any(|v| v.form == "distance"));
}

#[test]
fn prox_descent_lemma() {
    let p = problem(0.05);
    let t = prox_trace(&p);
    let (x_hat, _) = lasso_optimum(&p);
    let zs = vec![x_hat, Vector::zeros(5), Vector::from(vec![1.0; 5])];
    assert_pass(&check_prox_descent_lemma(&p, &t, &zs).unwrap());
    let bad = mutate(&t, |k, _, x| {
        if k == 3 {
            x.iter_mut().for_each(|v| *v += 5.0);
        }
    });
    assert_fail(&check_prox_descent_lemma(&p, &bad, &zs).unwrap());
}

#[test]
fn sublinear_prox() {
    let p = problem(0.05);
    let t = prox_trace(&p);
    let (x_hat, _) = lasso_optimum(&p);
    assert_pass(&check_sublinear_prox(&p, &t, &x_hat).unwrap());
    let bad = mutate(&t, |k, rec, _| {
        if k == 20 {
            rec.objective += 10.0;
        }
    });
    assert_fail(&check_sublinear_prox(&p, &bad, &x_hat).unwrap());
}

#[test]
fn exponential_prox() {
    let p = problem(0.05);
    let t = prox_trace(&p);
    let (_, f_star) = lasso_optimum(&p);
    let m = mu(&p);
    assert_pass(&check_exponential_prox(&p, &t, f_star, &m).unwrap());
    // a stalled run: the gap never shrinks
    let f1 = t.records()[1].objective;
    let bad = mutate(&t, |k, rec, _| {
        if k >= 1 {
            rec.objective = f1;
        }
    });
    let r = check_exponential_prox(&p, &bad, f_star, &m).unwrap();
    assert_fail(&r);
    assert!(r.violations.iter().any(|v| v.form == "per-step"));
}

#[test]
fn overlong_steps_are_refused() {
    let p = problem(0.05);
    let lipschitz = p.lipschitz(LipschitzMode::Analytic).unwrap();
    let t = mutate(&prox_trace(&p), |_, rec, _| rec.step = 1.5 / lipschitz);
    let (x_hat, f_star) = lasso_optimum(&p);
    assert!(check_sublinear_prox(&p, &t, &x_hat).is_err());
    assert!(check_exponential_prox(&p, &t, f_star, &mu(&p)).is_err());
    assert!(check_prox_descent_lemma(&p, &t, &[]).is_err());
}

#[test]
fn rank_deficient_problem_has_no_strong_convexity() {
    let ds = generate_synthetic(&SyntheticSpec::new(8, 4, 2, 22)).unwrap();
    let p = ds.problem;
    let m = mu(&p);
    assert!(!m.valid);
    let t = prox_trace_wide(&p);
    assert!(check_exponential_prox(&p, &t, 0.0, &m).is_err());
}

fn prox_trace_wide(p: &LassoProblem) -> IterationTrace {
    let cfg = SolverConfig { x0: None, ..config(10) };
    prox_gd_constant_solve(p, &cfg).unwrap().trace
}

#[test]
fn traces_without_iterates_are_refused() {
    let p = problem(0.0);
    let cfg = SolverConfig { record_iterates: false, ..config(10) };
    let t = gd_solve(&p, &cfg).unwrap().trace;
    assert!(check_sublinear_gd(&p, &t, &least_squares(&p)).is_err());
    assert!(check_max_decrease(&p, &t).is_ok());
}
