//! Watch the variable step adapt to the local curvature. Prints `λ_k` next
//! to the fixed `1/L` step used by the constant-step method.

use proxkit::data::generate_synthetic;
use proxkit::solvers::solve;
use proxkit::{AdamConfig, LipschitzMode, Method, SolverConfig, SyntheticSpec};

fn main() -> proxkit::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::new(50, 2000, 5, 7))?;
    let l = ds.problem.lipschitz(LipschitzMode::Paper)?;
    println!("constant step 1/L = {:.4}", 1.0 / l);

    let mut print = |rec: &proxkit::TraceRecord| {
        if rec.k < 15 || rec.k % 10 == 0 {
            println!("k = {:>3}  lambda = {:.4}  F = {:.8}", rec.k, rec.step, rec.objective);
        }
    };
    let r = solve(
        Method::ProxVar,
        &ds.problem,
        &SolverConfig::default(),
        &AdamConfig::default(),
        Some(&mut print),
    )?;
    println!("stopped after {} iterations: {}", r.iterations, r.stop_reason);
    Ok(())
}
