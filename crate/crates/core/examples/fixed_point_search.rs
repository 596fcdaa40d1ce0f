//! Multistart fixed-point search on a few operators.

use qso::dynamics::find_fixed_points;
use qso::operators::{build_v1, ganikhodzhaev_lambda, ganikhodzhaev_v0, V1Coefficients};
use qso::{CubicMatrix, Result};

fn main() -> Result<()> {
    let cases: Vec<(&str, CubicMatrix)> = vec![
        ("V0", ganikhodzhaev_v0()),
        ("V_0.3", ganikhodzhaev_lambda(0.3)?),
        (
            "single-male F-QSO, m = 5",
            build_v1(&V1Coefficients::uniform(5)?)?,
        ),
    ];
    for (name, p) in &cases {
        let report = find_fixed_points(p, 64, 1)?;
        println!("{name}:");
        for c in &report.candidates {
            println!("  {:?}  residual {:.1e}", c.point, c.residual);
        }
        if let Some(x) = &report.unique_in_simplex {
            println!("  unique: {x}");
        }
    }
    Ok(())
}
