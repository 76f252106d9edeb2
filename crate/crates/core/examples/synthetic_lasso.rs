//! Generate a correlated sparse regression problem, solve it with both
//! proximal methods and compare against the planted coefficients.

use proxkit::data::generate_synthetic;
use proxkit::linalg::distance;
use proxkit::solvers::solve;
use proxkit::{AdamConfig, Method, SolverConfig, SyntheticSpec};

fn main() -> proxkit::Result<()> {
    let spec = SyntheticSpec::new(100, 5000, 10, 42);
    let ds = generate_synthetic(&spec)?;
    let truth = ds.ground_truth.clone().expect("synthetic data keeps x*");
    let cfg = SolverConfig {
        reference: Some(truth.clone()),
        ..SolverConfig::default()
    };

    for method in [Method::ProxConst, Method::ProxVar] {
        let r = solve(method, &ds.problem, &cfg, &AdamConfig::default(), None)?;
        let nonzero = r.final_x.iter().filter(|v| v.abs() > 1e-8).count();
        println!(
            "{:<10} {:>4} iterations ({})  F = {:.6}  |x - x*| = {:.4}  nonzeros = {nonzero}",
            method.name(),
            r.iterations,
            r.stop_reason,
            r.final_objective,
            distance(&r.final_x, &truth),
        );
    }
    Ok(())
}
