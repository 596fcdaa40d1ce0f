//! The two-type F-QSO: one male, one female, mixed offspring `(a, b, c)`.
//!
//! Iterates from a few starts, compares `phi` with its closed form, and lists
//! the algebraic fixed points.

use qso::dynamics::{fixed_points_v0_m2, phi, phi_closed_form, trajectory};
use qso::operators::build_v0_m2;
use qso::{Result, SimplexPoint};

fn main() -> Result<()> {
    let (a, b, c) = (0.2, 0.5, 0.3);
    let p = build_v0_m2(a, b, c)?;
    let e0 = SimplexPoint::vertex(3, 0)?;

    for start in [[0.0, 0.5, 0.5], [0.1, 0.6, 0.3], [0.9, 0.05, 0.05]] {
        let x0 = SimplexPoint::new(start.to_vec())?;
        let phi0 = phi(&x0)?;
        let t = trajectory(&p, x0, 20, 1e-9, Some(e0.clone()))?;
        println!(
            "start {start:?}: {} after {} steps",
            t.stop_reason,
            t.steps()
        );
        for (n, x) in t.points.iter().enumerate().take(5) {
            let closed = phi_closed_form(b, c, phi0, n as u32)?;
            println!(
                "  n={n}  x={}  phi={:.3e}  closed form={closed:.3e}",
                x,
                phi(x)?
            );
        }
    }

    let report = fixed_points_v0_m2(a, b, c)?;
    for cand in &report.candidates {
        println!(
            "fixed point {:?} in simplex: {}",
            cand.point, cand.in_simplex
        );
    }
    Ok(())
}
