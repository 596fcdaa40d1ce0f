use qso::analysis::{conjecture_scan, run_trial, trial_seed, FPolicy, ScanParameters};

fn params(f_policy: FPolicy, seed: u64) -> ScanParameters {
    ScanParameters {
        m: 4,
        f_policy,
        iterations: 50,
        tol: 1e-9,
        seed,
    }
}

#[test]
fn same_seed_same_report() {
    let a = conjecture_scan(params(FPolicy::Random, 7), 64).unwrap();
    let b = conjecture_scan(params(FPolicy::Random, 7), 64).unwrap();
    assert_eq!(a, b);
    let c = conjecture_scan(params(FPolicy::Random, 8), 64).unwrap();
    assert_ne!(a.outcomes, c.outcomes);
}

#[test]
fn thread_count_does_not_matter() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| conjecture_scan(params(FPolicy::All, 3), 50).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| conjecture_scan(params(FPolicy::All, 3), 50).unwrap());
    assert_eq!(single, many);
}

#[test]
fn prefix_of_a_longer_scan_matches() {
    let short = conjecture_scan(params(FPolicy::Fixed(vec![2, 3]), 11), 10).unwrap();
    let long = conjecture_scan(params(FPolicy::Fixed(vec![2, 3]), 11), 40).unwrap();
    assert_eq!(short.outcomes[..], long.outcomes[..10]);
}

#[test]
fn rows_replay_from_their_seed() {
    let report = conjecture_scan(params(FPolicy::Random, 5), 20).unwrap();
    for (t, o) in report.outcomes.iter().enumerate() {
        assert_eq!(o.seed, trial_seed(5, t));
        let again = run_trial(4, &o.females, o.seed, 50, 1e-9).unwrap();
        assert_eq!(again.final_dist.to_bits(), o.final_dist.to_bits());
        assert_eq!(again.steps, o.steps);
    }
}
