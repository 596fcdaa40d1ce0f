//! Counting pairs absorbed into the empty body, and the bound table.

use qso::analysis::{count_first_row, sample_random_f_qso, verify_priority_inequality};
use qso::operators::build_f_qso;
use qso::Result;

fn main() -> Result<()> {
    for (m, females) in [(2, vec![2]), (4, vec![2, 3, 4]), (6, vec![1, 3, 5])] {
        let p = build_f_qso(&sample_random_f_qso(m, &females, 1)?)?;
        let c = count_first_row(&p);
        println!(
            "m={m} F={females:?}: N1={} N1~={} pairs={} bounds: N1>={:?} N1~<={:?}",
            c.n1, c.n1_tilde, c.total_pairs, c.n1_lower_bound, c.n1_tilde_upper_bound
        );
    }

    let table = verify_priority_inequality(8);
    println!(
        "{} partitions checked, all pass: {}",
        table.rows.len(),
        table.all_pass
    );
    for row in table.rows.iter().filter(|r| r.m == 4) {
        println!(
            "  m=4 F={:?}: {} > {}",
            row.females, row.n1_lower_bound, row.n1_tilde_upper_bound
        );
    }
    Ok(())
}
