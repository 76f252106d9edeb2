//! A small wall-clock comparison of the three solvers on two problem sizes.

use std::time::Instant;

use proxkit::data::generate_synthetic;
use proxkit::solvers::solve;
use proxkit::{AdamConfig, Method, SolverConfig, SyntheticSpec};

fn main() -> proxkit::Result<()> {
    println!("{:<12} {:<10} {:>6} {:>10} {:>12}", "problem", "method", "iters", "time_ms", "F");
    for (d, m) in [(50, 2000), (200, 10_000)] {
        let ds = generate_synthetic(&SyntheticSpec::new(d, m, d / 10, 1))?;
        for method in [Method::ProxConst, Method::ProxVar, Method::Adam] {
            let start = Instant::now();
            let r = solve(method, &ds.problem, &SolverConfig::default(), &AdamConfig::default(), None)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            println!(
                "{:<12} {:<10} {:>6} {:>10.2} {:>12.6}",
                format!("{d}x{m}"),
                method.name(),
                r.iterations,
                ms,
                r.final_objective
            );
        }
    }
    Ok(())
}
