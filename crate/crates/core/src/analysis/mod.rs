//! Counting, random operators and the convergence scan.

mod conjecture;
mod counting;
mod sampling;

pub use conjecture::{
    conjecture_scan, run_trial, splitmix64, trial_seed, ConjectureReport, FPolicy, ScanParameters,
    TrialOutcome, EVIDENCE_LABEL, MAX_ALL_POLICY_M,
};
pub use counting::{
    count_first_row, priority_bounds, total_pairs, verify_priority_inequality, CountReport,
    PriorityRow, PriorityTable,
};
pub use sampling::{sample_random_f_qso, uniform_simplex};
