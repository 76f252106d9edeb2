use super::solve::{load_dataset, write_json};
use super::{CliError, CliResult, Stage, VerifyArgs, EXIT_VERIFY};
use crate::theory::{random_suite, verify_problem, CheckKind, CheckOutcome, CheckStatus, VerifyConfig};

pub(super) fn run(args: VerifyArgs) -> CliResult<()> {
    let checks = if args.checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        args.checks.clone()
    };
    let cfg = VerifyConfig {
        max_iters: args.max_iters,
        seed: args.seed,
        ..VerifyConfig::default()
    };
    if cfg.max_iters < 2 {
        return Err(CliError::usage("--max-iters must be at least 2"));
    }
    let outcomes = match (&args.dataset, args.random_suite) {
        (Some(_), true) => return Err(CliError::usage("give either --dataset or --random-suite")),
        (None, false) => return Err(CliError::usage("nothing to verify: pass --dataset or --random-suite")),
        (None, true) => random_suite(args.seed, args.count, &checks, &cfg).solver()?,
        (Some(path), false) => {
            let loaded = load_dataset(path, &args.data, args.data.alpha)?;
            let name = path.display().to_string();
            verify_problem(&name, &loaded.ds.problem, &checks, &cfg).solver()?
        }
    };

    for o in &outcomes {
        println!("{}", summary_line(o));
    }
    if let Some(path) = &args.json {
        write_json(path, &outcomes)?;
    }
    let failed = outcomes.iter().filter(|o| o.status == CheckStatus::Failed).count();
    if failed > 0 {
        return Err(CliError::new(EXIT_VERIFY, format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn summary_line(o: &CheckOutcome) -> String {
    match (&o.status, &o.report) {
        (CheckStatus::Skipped, _) => format!(
            "SKIPPED {:<16} {}: {}",
            o.check.name(),
            o.instance,
            o.reason.as_deref().unwrap_or("")
        ),
        (status, Some(r)) => format!(
            "{:<7} {:<16} {}: {} inequalities, {} violations, worst slack {:.3e} at index {}",
            if *status == CheckStatus::Passed { "PASS" } else { "FAIL" },
            o.check.name(),
            o.instance,
            r.checked,
            r.violations.len(),
            r.worst_slack,
            r.tightest_index.map_or("-".to_string(), |i| i.to_string()),
        ),
        (_, None) => format!("{:<7} {:<16} {}", "FAIL", o.check.name(), o.instance),
    }
}
