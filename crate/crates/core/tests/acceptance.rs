//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use proxkit::data::generate_synthetic;
use proxkit::prox::soft_threshold;
use proxkit::solvers::{solve, prox_gd_constant_solve};
use proxkit::theory::{random_instance, random_suite, CheckKind, CheckStatus, VerifyConfig};
use proxkit::{AdamConfig, LassoProblem, LipschitzMode, Matrix, Method, SolverConfig, SyntheticSpec, Vector};

const SEEDS: std::ops::RangeInclusive<u64> = 1..=10;
const REPEATS: usize = 7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn prox_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z: f64 = rng.random_range(-5.0..5.0);
        let lambda: f64 = rng.random_range(0.01..1.0);
        let alpha: f64 = rng.random_range(0.0..1.0);
        let theta = lambda * alpha;
        let phi = |u: f64| (u - z) * (u - z) / (2.0 * lambda) + alpha * u.abs();
        let steps = (6.0 * theta / 1e-4).ceil() as usize;
        let mut best = (phi(0.0), 0.0);
        for i in 0..=steps {
            let u = z - 3.0 * theta + i as f64 * 1e-4;
            let value = phi(u);
            if value < best.0 {
                best = (value, u);
            }
        }
        let got = soft_threshold(&[z], theta).unwrap()[0];
        worst = worst.max((got - best.1).abs());
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        worst <= 2e-4 && secs < 5.0,
        format!("max |prox − grid argmin| = {worst:.2e} over 1000 triples, {secs:.2} s"),
    )
}

fn gradient_check() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(1..=20);
        let m = rng.random_range(1..=60);
        let data: Vec<f64> = (0..m * d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vector = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let p = LassoProblem::new(Matrix::new(m, d, data).unwrap(), b, 0.01).unwrap();
        let x: Vector = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let g = p.smooth_gradient(&x).unwrap();
        let mut fd = Vector::zeros(d);
        for i in 0..d {
            let h = 1e-5 * x[i].abs().max(1.0);
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[i] += h;
            minus[i] -= h;
            fd[i] = (p.smooth_value(&plus).unwrap() - p.smooth_value(&minus).unwrap()) / (2.0 * h);
        }
        let rel = fd.sub(&g).norm2() / g.norm2().max(1e-12);
        worst = worst.max(rel);
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        worst < 1e-5 && secs < 5.0,
        format!("max relative error {worst:.2e} over 100 pairs, {secs:.2} s"),
    )
}

fn theorem_suite() -> Outcome {
    let started = Instant::now();
    let cfg = VerifyConfig::default();
    let outcomes = random_suite(7, 20, &CheckKind::ALL, &cfg).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let count = |s: CheckStatus| outcomes.iter().filter(|o| o.status == s).count();
    let violations: usize = outcomes
        .iter()
        .filter_map(|o| o.report.as_ref())
        .map(|r| r.violations.len())
        .sum();
    let inequalities: usize = outcomes.iter().filter_map(|o| o.report.as_ref()).map(|r| r.checked).sum();
    let failed = count(CheckStatus::Failed);
    outcome(
        failed == 0 && violations == 0 && secs < 60.0,
        format!(
            "20 instances, {} passed, {} skipped (not strongly convex), {failed} failed, {violations} violations in {inequalities} inequalities, z samples {}, {secs:.1} s",
            count(CheckStatus::Passed),
            count(CheckStatus::Skipped),
            cfg.z_samples
        ),
    )
}

struct SeedRun {
    seed: u64,
    const_iters: usize,
    var_iters: usize,
    const_speed: f64,
    var_speed: f64,
    inv_lipschitz: f64,
    lambda_min: f64,
    lambda_max: f64,
    var_final: f64,
    adam_final: f64,
    /// Variable-step iterations with `eta_rho = 0.99`, for the log only.
    slow_decay_iters: usize,
    slow_decay_final: f64,
}

/// Mean wall time over the repeats, solve (including `L`) only.
fn timed(method: Method, p: &LassoProblem, cfg: &SolverConfig) -> (proxkit::SolveResult, f64) {
    let mut total = 0.0;
    let mut result = None;
    for _ in 0..REPEATS {
        let started = Instant::now();
        let r = solve(method, p, cfg, &AdamConfig::default(), None).unwrap();
        total += started.elapsed().as_secs_f64();
        if let Some(prev) = &result {
            let prev: &proxkit::SolveResult = prev;
            assert_eq!(prev.iterations, r.iterations, "iterations changed between repeats");
        }
        result = Some(r);
    }
    (result.unwrap(), total / REPEATS as f64)
}

fn benchmark_runs() -> Vec<SeedRun> {
    let mut runs = Vec::new();
    for seed in SEEDS {
        let ds = generate_synthetic(&SyntheticSpec::new(300, 30_000, 30, seed)).unwrap();
        let p = &ds.problem;
        let cfg = SolverConfig {
            max_iters: 1000,
            reference: ds.ground_truth.clone(),
            ..SolverConfig::default()
        };
        let (constant, const_time) = timed(Method::ProxConst, p, &cfg);
        let (variable, var_time) = timed(Method::ProxVar, p, &cfg);
        let adam = solve(Method::Adam, p, &cfg, &AdamConfig::default(), None).unwrap();
        let slow_cfg = SolverConfig {
            eta_rho: 0.99,
            ..cfg.clone()
        };
        let slow = solve(Method::ProxVar, p, &slow_cfg, &AdamConfig::default(), None).unwrap();
        let steps: Vec<f64> = variable.trace.steps().collect();
        let run = SeedRun {
            seed,
            const_iters: constant.iterations,
            var_iters: variable.iterations,
            const_speed: constant.iterations as f64 / const_time,
            var_speed: variable.iterations as f64 / var_time,
            inv_lipschitz: 1.0 / constant.lipschitz.unwrap(),
            lambda_min: steps.iter().copied().fold(f64::INFINITY, f64::min),
            lambda_max: steps.iter().copied().fold(0.0, f64::max),
            var_final: variable.final_objective,
            adam_final: adam.final_objective,
            slow_decay_iters: slow.iterations,
            slow_decay_final: slow.final_objective,
        };
        println!(
            "  seed {:>2}: iters const {:>3} var {:>3} (ratio {:.2}), it/s const {:>7.0} var {:>7.0}, 1/L {:.4}, lambda [{:.3}, {:.3}], F var {:.5} adam {:.5} ({}, {}); eta_rho 0.99: {} iters, F {:.5}",
            run.seed,
            run.const_iters,
            run.var_iters,
            run.const_iters as f64 / run.var_iters as f64,
            run.const_speed,
            run.var_speed,
            run.inv_lipschitz,
            run.lambda_min,
            run.lambda_max,
            run.var_final,
            run.adam_final,
            constant.stop_reason,
            variable.stop_reason,
            run.slow_decay_iters,
            run.slow_decay_final,
        );
        runs.push(run);
    }
    runs
}

fn iteration_ordering(runs: &[SeedRun]) -> Outcome {
    let fewer = runs.iter().filter(|r| r.var_iters < r.const_iters).count();
    let mut ratios: Vec<f64> = runs.iter().map(|r| r.const_iters as f64 / r.var_iters as f64).collect();
    let med = median(&mut ratios);
    outcome(
        fewer >= 9 && med > 1.5,
        format!("variable step needs fewer iterations on {fewer}/10 seeds, median ratio {med:.3}"),
    )
}

fn speed_ordering(runs: &[SeedRun]) -> Outcome {
    let mut c: Vec<f64> = runs.iter().map(|r| r.const_speed).collect();
    let mut v: Vec<f64> = runs.iter().map(|r| r.var_speed).collect();
    let (c, v) = (median(&mut c), median(&mut v));
    outcome(
        c >= v,
        format!("median iterations/s constant {c:.0} vs variable {v:.0} (mean of {REPEATS} repeats)"),
    )
}

fn step_trace(runs: &[SeedRun]) -> Outcome {
    let ok = runs.iter().filter(|r| {
        (0.5..=0.8).contains(&r.inv_lipschitz) && r.lambda_min < r.inv_lipschitz && r.lambda_max > r.inv_lipschitz
    });
    let count = ok.count();
    let lo = runs.iter().map(|r| r.inv_lipschitz).fold(f64::INFINITY, f64::min);
    let hi = runs.iter().map(|r| r.inv_lipschitz).fold(0.0, f64::max);
    outcome(
        count == runs.len(),
        format!("lambda trace crosses 1/L on {count}/10 seeds, 1/L in [{lo:.4}, {hi:.4}]"),
    )
}

fn adam_ordering(runs: &[SeedRun]) -> Outcome {
    let worse = runs.iter().filter(|r| r.adam_final >= r.var_final).count();
    outcome(worse >= 8, format!("Adam final F >= variable-step final F on {worse}/10 seeds"))
}

/// Up to the solver's own stopping iteration the trace must not increase at
/// all. Past that point, with the stop disabled, any increase must be
/// floating-point noise.
fn monotone_traces() -> Outcome {
    let mut increases = 0;
    let mut records = 0;
    let mut worst_noise: f64 = 0.0;
    for index in 0..20 {
        let (_, p) = random_instance(7, index).unwrap();
        let cfg = SolverConfig {
            lipschitz_mode: LipschitzMode::Analytic,
            max_iters: 1000,
            ..SolverConfig::default()
        };
        let result = prox_gd_constant_solve(&p, &cfg).unwrap();
        let mut f: Vec<f64> = result.trace.objectives().collect();
        f.push(result.final_objective);
        records += f.len();
        increases += f.windows(2).filter(|w| w[1] > w[0]).count();

        let free = SolverConfig {
            monotone_stop: false,
            ..cfg
        };
        let result = prox_gd_constant_solve(&p, &free).unwrap();
        let f: Vec<f64> = result.trace.objectives().collect();
        for w in f.windows(2) {
            worst_noise = worst_noise.max((w[1] - w[0]) / w[0].abs());
        }
    }
    outcome(
        increases == 0 && worst_noise <= 1e-12,
        format!(
            "20 analytic-step traces, {records} objective values up to the stop, {increases} increases; without the stop the largest relative increase is {worst_noise:.1e}"
        ),
    )
}

fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let mut bins = Vec::new();
    let mut traces = Vec::new();
    let mut results = Vec::new();
    for round in 0..2 {
        let cache = root.join(format!("cache{round}"));
        let out = root.join(format!("run{round}"));
        let gen = [
            "proxkit", "gen", "--d", "300", "--m", "30000", "--s", "30", "--seed", "1", "--out-dir",
        ];
        let code = proxkit::cli::run(gen.iter().map(|s| s.to_string()).chain([cache.display().to_string()]));
        assert_eq!(code, 0);
        let bin = fs::read_dir(&cache)
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|e| e == "bin"))
            .unwrap();
        let args = [
            "proxkit".to_string(),
            "solve".into(),
            "--dataset".into(),
            bin.display().to_string(),
            "--method".into(),
            "prox-var".into(),
            "--out-dir".into(),
            out.display().to_string(),
        ];
        assert_eq!(proxkit::cli::run(args), 0);
        bins.push(fs::read(&bin).unwrap());
        traces.push(strip_elapsed(&fs::read_to_string(out.join("trace.csv")).unwrap()));
        results.push(fs::read(Path::new(&out).join("result.json")).unwrap());
    }
    let same_bin = bins[0] == bins[1];
    let same_trace = traces[0] == traces[1];
    let same_result = results[0] == results[1];
    outcome(
        same_bin && same_trace && same_result,
        format!(
            "dataset bytes identical: {same_bin}, trace CSV identical without elapsed_s: {same_trace}, result.json identical: {same_result} ({} trace rows)",
            traces[0].lines().count() - 1
        ),
    )
}

fn main() {
    let mut failures = 0;
    let mut report = |n: u32, name: &str, o: Outcome| {
        println!("criterion {n} {name}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failures += 1;
        }
    };
    report(1, "prox oracle equivalence", prox_oracle());
    report(2, "gradient finite differences", gradient_check());
    report(3, "theorem suite", theorem_suite());

    let started = Instant::now();
    println!("benchmark d=300 m=30000 s=30, seeds 1-10, defaults:");
    let runs = benchmark_runs();
    let secs = started.elapsed().as_secs_f64();
    let mut ordering = iteration_ordering(&runs);
    ordering.passed &= secs < 180.0;
    ordering.detail += &format!(", {secs:.1} s for all seeds");
    report(4, "iteration ordering", ordering);
    report(5, "speed ordering", speed_ordering(&runs));
    report(6, "step trace around 1/L", step_trace(&runs));
    report(7, "Adam ordering", adam_ordering(&runs));
    report(8, "monotone analytic traces", monotone_traces());
    report(9, "determinism", determinism());

    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
