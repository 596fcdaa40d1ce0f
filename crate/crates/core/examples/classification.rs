//! Classifying operators and the Volterra skew-matrix round trip.

use qso::classify;
use qso::operators::{
    build_v0_m2, ganikhodzhaev_lambda, ganikhodzhaev_v0, ganikhodzhaev_v1, skew_from_cubic,
    volterra_from_skew,
};
use qso::{Result, SimplexPoint};

fn main() -> Result<()> {
    let cases = [
        ("V0", ganikhodzhaev_v0()),
        ("V1", ganikhodzhaev_v1()),
        ("V_0.5", ganikhodzhaev_lambda(0.5)?),
        ("two-type F-QSO", build_v0_m2(0.0, 0.5, 0.5)?),
    ];
    for (name, p) in &cases {
        let r = classify(p);
        println!(
            "{name:<15} volterra={} strictly_non_volterra={} f_qso_sets={:?}",
            r.is_volterra, r.is_strictly_non_volterra, r.f_qso_sets
        );
        if let Some(w) = r.violations.first() {
            println!("{:<15} e.g. {w}", "");
        }
    }

    // the canonical form reproduces the quadratic map
    let v0 = ganikhodzhaev_v0();
    let skew = skew_from_cubic(&v0)?;
    let op = volterra_from_skew(skew.clone());
    let x = SimplexPoint::new(vec![0.2, 0.3, 0.5])?;
    println!(
        "skew row 0: {:?}",
        (0..3).map(|i| skew.get(0, i)).collect::<Vec<_>>()
    );
    println!("cubic form: {}", v0.apply(&x)?);
    println!("skew form:  {}", op.apply(&x)?);
    println!("rebuilt matrix equal: {}", skew.to_cubic()? == v0);
    Ok(())
}
