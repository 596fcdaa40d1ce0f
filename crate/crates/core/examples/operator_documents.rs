//! Saving operators as JSON documents, writing a trajectory CSV and
//! replaying it.

use qso::analysis::sample_random_f_qso;
use qso::cli::{replay_trajectory, write_trajectory_csv, OperatorDocument};
use qso::dynamics::trajectory;
use qso::operators::build_f_qso;
use qso::{Result, SimplexPoint};

fn main() -> Result<()> {
    let spec = sample_random_f_qso(3, &[2], 5)?;
    let doc = OperatorDocument::from_spec(&spec);
    let json = doc.to_canonical_json()?;
    println!("{json}");

    let reloaded = OperatorDocument::from_json(&json)?;
    assert_eq!(reloaded.to_canonical_json()?, json);
    let p = reloaded.matrix()?;
    assert_eq!(p, build_f_qso(&spec)?);

    // the same operator as a sparse cubic document
    let cubic = OperatorDocument::from_matrix(&p);
    assert_eq!(cubic.matrix()?, p);

    let t = trajectory(&p, SimplexPoint::uniform(4)?, 8, -1.0, None)?;
    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &p, &t)?;
    let csv = String::from_utf8(csv).expect("CSV is UTF-8");
    print!("{csv}");
    let replay = replay_trajectory(&p, &csv)?;
    println!("replay ok: {} ({} rows)", replay.ok(), replay.rows_checked);
    Ok(())
}
