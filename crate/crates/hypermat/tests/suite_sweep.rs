//! Seed and dimension robustness of the full suite.

use hypermat::verify::{run_suite, SuiteOptions};

#[test]
fn suite_is_seed_robust() {
    for seed in [1u64, 1234567] {
        let rep = run_suite(&SuiteOptions {
            seed,
            dims: vec![1, 2, 3],
            cases_per_identity: 2,
            tol: 1e-7,
        })
        .unwrap();
        assert!(
            rep.summary.all_passed,
            "seed {seed}: {} failed",
            rep.summary.total_failed
        );
        assert_eq!(rep.summary.total_skipped, 0);
    }
}

#[test]
fn suite_holds_at_high_dimensions() {
    // dims 4..6 run at the relaxed tolerance tier
    let rep = run_suite(&SuiteOptions {
        seed: 42,
        dims: vec![4, 5, 6],
        cases_per_identity: 2,
        tol: 1e-7,
    })
    .unwrap();
    assert!(
        rep.summary.all_passed,
        "{} failed of {}",
        rep.summary.total_failed,
        rep.cases.len()
    );
}
