//! Load a CSV, standardize on the training rows, fit a LASSO model and
//! report held-out error. Writes its own toy CSV first so it runs anywhere.

use proxkit::data::{generate_synthetic, load_csv, standardize, train_test_split, write_csv};
use proxkit::solvers::solve;
use proxkit::{AdamConfig, Method, SolverConfig, SyntheticSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("proxkit-csv-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("toy.csv");
    write_csv(&generate_synthetic(&SyntheticSpec::new(8, 500, 3, 5))?, &path)?;

    let ds = load_csv(&path, "y")?;
    let (train, test) = train_test_split(&ds, 0.8, 0)?;
    let (train, stats) = standardize(&train, None)?;
    let (test, _) = standardize(&test, Some(&stats))?;

    let r = solve(Method::ProxVar, &train.problem, &SolverConfig::default(), &AdamConfig::default(), None)?;
    let pred = test.problem.a().matvec(&r.final_x)?;
    let mse = pred.iter().zip(test.problem.b().iter()).map(|(p, y)| (p - y).powi(2)).sum::<f64>() / pred.len() as f64;

    let names = train.column_names.clone().unwrap_or_default();
    for (name, w) in names.iter().zip(r.final_x.iter()) {
        println!("{name:>4} {w:+.4}");
    }
    println!("train rows {}, test rows {}, test MSE (standardized) {mse:.4}", train.problem.m(), test.problem.m());
    Ok(())
}
