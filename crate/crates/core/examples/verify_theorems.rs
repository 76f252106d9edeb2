//! Run every convergence-bound check on one synthetic problem and on a
//! handful of random instances.

use proxkit::data::generate_synthetic;
use proxkit::theory::{random_suite, verify_problem, CheckKind, CheckStatus, VerifyConfig};
use proxkit::SyntheticSpec;

fn main() -> proxkit::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::new(20, 400, 4, 3))?;
    let cfg = VerifyConfig::default();
    for o in verify_problem("synthetic", &ds.problem, &CheckKind::ALL, &cfg)? {
        match (&o.status, &o.report) {
            (CheckStatus::Skipped, _) => println!("{:<16} skipped: {}", o.check.name(), o.reason.unwrap_or_default()),
            (_, Some(r)) => println!(
                "{:<16} {:?}: {} inequalities, worst slack {:.3e}",
                o.check.name(),
                o.status,
                r.checked,
                r.worst_slack
            ),
            _ => println!("{:<16} {:?}", o.check.name(), o.status),
        }
    }

    let outcomes = random_suite(1, 8, &CheckKind::ALL, &cfg)?;
    let count = |s: CheckStatus| outcomes.iter().filter(|o| o.status == s).count();
    println!(
        "random suite: {} passed, {} failed, {} skipped",
        count(CheckStatus::Passed),
        count(CheckStatus::Failed),
        count(CheckStatus::Skipped)
    );
    Ok(())
}
