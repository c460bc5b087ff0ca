//! The acceptance gate: run the full verification matrix at its stated
//! scales and tolerances, print one line per criterion, and fail the test if
//! any criterion fails. Scales and thresholds live in `schurq::suite` and
//! are the same ones `schurq verify-all` runs.

use schurq::suite::{run_acceptance, SuiteConfig};

#[test]
fn full_acceptance_matrix() {
    let outcomes = run_acceptance(SuiteConfig::default());
    assert_eq!(outcomes.len(), 16, "expected the complete criterion matrix");
    for o in &outcomes {
        println!("{o}");
    }
    let failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.to_string())
        .collect();
    assert!(
        failures.is_empty(),
        "{} criterion(s) failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn mutation_hook_breaks_exactly_one_criterion() {
    for target in ["schur", "theta-quotient", "triple-product"] {
        let outcomes = run_acceptance(SuiteConfig {
            quick: true,
            inject_mutation: Some(target.into()),
            ..Default::default()
        });
        for o in &outcomes {
            if o.name == target {
                assert!(!o.passed, "mutation in {target} went unnoticed");
            } else {
                assert!(o.passed, "mutation in {target} leaked into {}: {o}", o.name);
            }
        }
    }
}
