//! Stepwise convergence certificate for an F-QSO with a single male.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qso::analysis::uniform_simplex;
use qso::dynamics::convergence_report;
use qso::operators::{build_v1, V1Coefficients};
use qso::{Result, SimplexPoint};

fn main() -> Result<()> {
    let m = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows = (2..=m).map(|_| uniform_simplex(m + 1, &mut rng)).collect();
    let p = build_v1(&V1Coefficients::new(m, rows)?)?;
    let x0 = SimplexPoint::new(uniform_simplex(m + 1, &mut rng))?;

    let report = convergence_report(&p, x0, 12, 1e-12)?;
    println!("certification: {:?}", report.certification);
    println!("step  phi         bound       max x_k (k>=1)  ok");
    for s in &report.steps {
        println!(
            "{:>4}  {:<10.3e}  {:<10.3e}  {:<14.3e}  {}",
            s.step,
            s.phi,
            s.bound.value,
            s.non_empty_max,
            s.passes()
        );
    }
    println!(
        "within 1e-12 of the vertex at step {:?}",
        report.first_below_tol
    );
    println!("all checks pass: {}", report.all_checks_pass());
    Ok(())
}
