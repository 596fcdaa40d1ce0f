//! Seeded scan over random F-QSOs, one regime per line.

use qso::analysis::{conjecture_scan, FPolicy, ScanParameters};
use qso::Result;

fn main() -> Result<()> {
    let regimes = [
        (2, FPolicy::Fixed(vec![2])),
        (5, FPolicy::Fixed(vec![2, 3, 4, 5])),
        (4, FPolicy::Fixed(vec![2, 3])),
        (6, FPolicy::Random),
        (4, FPolicy::All),
    ];
    for (m, f_policy) in regimes {
        let params = ScanParameters {
            m,
            f_policy,
            iterations: 50,
            tol: 1e-9,
            seed: 7,
        };
        let r = conjecture_scan(params, 500)?;
        println!(
            "m={m} {:?}: {}/{} converged, max distance {:.1e}, slowest needed {:?} steps",
            r.parameters.f_policy, r.converged, r.trials, r.max_final_distance, r.worst_case.steps
        );
    }
    println!("({})", qso::analysis::EVIDENCE_LABEL);
    Ok(())
}
