//! Counting the empty-body slice `p[i][j][0]` over unordered parent pairs.
//!
//! `N1` counts pairs whose offspring is the empty body with probability
//! exactly 1, `N1~` the rest. Over `n = |E| + 1` states there are
//! `|E| (|E| + 3) / 2 + 1` unordered pairs (diagonal included). For an
//! F-QSO with classes `F` and `M`,
//!
//! ```text
//! N1  >= (|F|^2 + |M|^2 + 3|E|) / 2 + 1
//! N1~ <= |F| |M|
//! ```
//!
//! and the first bound strictly exceeds the second, so `N1 > N1~`.

use serde::Serialize;

use crate::classify::classify;
use crate::cubic::CubicMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n1: usize,
    pub n1_tilde: usize,
    pub total_pairs: usize,
    /// Best lower bound on `n1` over the F-QSO partitions found, if any.
    pub n1_lower_bound: Option<usize>,
    /// Best upper bound on `n1_tilde` over the F-QSO partitions found, if any.
    pub n1_tilde_upper_bound: Option<usize>,
}

/// `|E| (|E| + 3) / 2 + 1` for `|E| = n - 1`.
pub fn total_pairs(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `(n1_lower_bound, n1_tilde_upper_bound)` for class sizes `f` and `m - f`.
pub fn priority_bounds(m: usize, f: usize) -> (usize, usize) {
    let males = m - f;
    // f^2 + males^2 + 3m is always even
    ((f * f + males * males + 3 * m) / 2 + 1, f * males)
}

pub fn count_first_row(p: &CubicMatrix) -> CountReport {
    let n = p.n();
    let mut n1 = 0;
    for i in 0..n {
        for j in i..n {
            // exact comparison: builders write 1.0 for absorbed pairs
            if p.get(i, j, 0) == 1.0 {
                n1 += 1;
            }
        }
    }
    let total = total_pairs(n);
    let report = classify(p);
    let bounds = report
        .f_qso_sets
        .iter()
        .map(|f| priority_bounds(n - 1, f.len()));
    let n1_lower_bound = bounds.clone().map(|b| b.0).max();
    let n1_tilde_upper_bound = bounds.map(|b| b.1).min();
    CountReport {
        n1,
        n1_tilde: total - n1,
        total_pairs: total,
        n1_lower_bound,
        n1_tilde_upper_bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PriorityRow {
    pub m: usize,
    pub females: Vec<usize>,
    pub n1_lower_bound: usize,
    pub n1_tilde_upper_bound: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PriorityTable {
    pub rows: Vec<PriorityRow>,
    pub all_pass: bool,
}

/// Checks `lower > upper` for every `2 <= m <= m_max` and every nonempty
/// proper `F` of `{1, .., m}`.
pub fn verify_priority_inequality(m_max: usize) -> PriorityTable {
    let mut rows = Vec::new();
    for m in 2..=m_max {
        for mask in 1u64..(1u64 << m) - 1 {
            let females: Vec<usize> = (0..m)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| b + 1)
                .collect();
            let (lower, upper) = priority_bounds(m, females.len());
            rows.push(PriorityRow {
                m,
                females,
                n1_lower_bound: lower,
                n1_tilde_upper_bound: upper,
                holds: lower > upper,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.holds);
    PriorityTable { rows, all_pass }
}
