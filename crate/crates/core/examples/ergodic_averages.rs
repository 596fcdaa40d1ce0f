//! Cesàro averages: an F-QSO against the cycling Volterra preset.

use qso::dynamics::{cesaro_averages, log_schedule, step_sizes, trajectory};
use qso::operators::{build_v1, ganikhodzhaev_v0, V1Coefficients};
use qso::{Result, SimplexPoint};

fn main() -> Result<()> {
    let p = build_v1(&V1Coefficients::uniform(4)?)?;
    let x0 = SimplexPoint::uniform(5)?;
    println!("single-male F-QSO, m = 4");
    for (n, avg) in cesaro_averages(&p, x0, &log_schedule(2000))? {
        println!("  n={n:<5} {avg}");
    }

    let v0 = ganikhodzhaev_v0();
    let x0 = SimplexPoint::new(vec![0.5, 0.3, 0.2])?;
    println!("V0 from {x0}");
    for (n, avg) in cesaro_averages(&v0, x0.clone(), &log_schedule(10_000))? {
        println!("  n={n:<6} {avg}");
    }
    // The orbit hops between vertices with rapidly growing dwell times, so
    // within any finite window it ends up parked at one of them.
    let t = trajectory(&v0, x0, 10_000, -1.0, None)?;
    let mut near = None;
    for (n, x) in t.points.iter().enumerate() {
        let now = (0..3).find(|&k| x.coords()[k] >= 1.0 - 1e-9);
        if let Some(k) = now.filter(|_| now != near) {
            println!("  step {n:<5} arrives at vertex {k}");
        }
        near = now;
    }
    let moved = step_sizes(&t)[9_000..].iter().any(|&d| d > 0.0);
    println!("moves during the last 1000 steps: {moved}");
    Ok(())
}
