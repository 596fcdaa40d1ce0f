//! Monte Carlo scan for convergence of random F-QSOs to the empty-body
//! vertex.
//!
//! Every trial samples a female set (per policy), a random F-QSO and a
//! uniform start, iterates, and checks the max-norm distance to
//! `(1, 0, .., 0)` at the final step. The result is evidence, not a proof.
//!
//! Seeding: trial `t` under master seed `s` uses
//! `splitmix64(s + (t + 1) * 0x9E3779B97F4A7C15)` as its seed. The operator
//! and start are drawn from a ChaCha8 stream on that seed; a random female
//! set is drawn from a separate stream seeded by `splitmix64(trial_seed)`, so
//! the operator depends only on `(trial_seed, F)`. Trials never share state,
//! so the outcome is independent of execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::sampling::{sample_with, uniform_simplex};
use crate::dynamics::Orbit;
use crate::error::{QsoError, Result};
use crate::operators::build_f_qso;
use crate::simplex::SimplexPoint;

pub const EVIDENCE_LABEL: &str = "empirical evidence only; the scan proves nothing";

/// Largest `m` for which every female set can be enumerated.
pub const MAX_ALL_POLICY_M: usize = 20;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", content = "females", rename_all = "snake_case")]
pub enum FPolicy {
    Fixed(Vec<usize>),
    /// Cycles through every nonempty proper subset of `{1, .., m}` by bitmask.
    All,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanParameters {
    pub m: usize,
    pub f_policy: FPolicy,
    pub iterations: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub females: Vec<usize>,
    /// First step within `tol` of the vertex.
    pub steps: Option<usize>,
    pub final_dist: f64,
    pub final_point: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub label: &'static str,
    pub parameters: ScanParameters,
    pub trials: usize,
    pub converged: usize,
    pub max_final_distance: f64,
    /// The slowest trial: unconverged first, then by steps, then distance.
    pub worst_case: TrialOutcome,
    pub outcomes: Vec<TrialOutcome>,
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, trial: usize) -> u64 {
    splitmix64(master.wrapping_add((trial as u64 + 1).wrapping_mul(GOLDEN_GAMMA)))
}

fn mask_to_set(mask: u64, m: usize) -> Vec<usize> {
    (0..m)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

fn females_for(params: &ScanParameters, trial: usize, seed: u64) -> Vec<usize> {
    let m = params.m;
    match &params.f_policy {
        FPolicy::Fixed(f) => f.clone(),
        FPolicy::All => {
            let count = (1u64 << m) - 2;
            mask_to_set(1 + trial as u64 % count, m)
        }
        FPolicy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
            mask_to_set(rng.random_range(1..(1u64 << m) - 1), m)
        }
    }
}

/// One trial from its own seed. Reruns any row of a scan.
pub fn run_trial(
    m: usize,
    females: &[usize],
    seed: u64,
    iterations: usize,
    tol: f64,
) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = sample_with(m, females, &mut rng)?;
    let p = build_f_qso(&spec)?;
    let x0 = SimplexPoint::new(uniform_simplex(m + 1, &mut rng))?;
    let vertex = SimplexPoint::vertex(m + 1, 0)?;

    let mut steps = None;
    let mut last = x0.clone();
    for (step, item) in Orbit::new(&p, x0)?.take(iterations + 1).enumerate() {
        let x = item?;
        if steps.is_none() && x.max_distance(&vertex) <= tol {
            steps = Some(step);
        }
        last = x;
    }
    let final_dist = last.max_distance(&vertex);
    Ok(TrialOutcome {
        trial: 0,
        seed,
        females: spec.females().to_vec(),
        steps,
        final_dist,
        final_point: last.into_coords(),
        converged: final_dist <= tol,
    })
}

fn check(params: &ScanParameters, trials: usize) -> Result<()> {
    let bad = |msg: String| Err(QsoError::InvalidParameter(msg));
    if trials == 0 || params.iterations == 0 {
        return bad("trials and iterations must be at least 1".into());
    }
    if params.m < 2 {
        return bad(format!("m = {} must be at least 2", params.m));
    }
    if !(params.tol >= 0.0) {
        return bad(format!("tol = {} must be nonnegative", params.tol));
    }
    match &params.f_policy {
        FPolicy::All if params.m > MAX_ALL_POLICY_M => {
            bad(format!("policy `all` supports m <= {MAX_ALL_POLICY_M}"))
        }
        FPolicy::Random if params.m > 63 => bad("policy `random` supports m <= 63".into()),
        FPolicy::Fixed(f) => {
            // reuses the partition checks of the spec constructor
            sample_with(params.m, f, &mut ChaCha8Rng::seed_from_u64(0)).map(|_| ())
        }
        _ => Ok(()),
    }
}

pub fn conjecture_scan(params: ScanParameters, trials: usize) -> Result<ConjectureReport> {
    check(&params, trials)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(params.seed, trial);
            let females = females_for(&params, trial, seed);
            let mut outcome = run_trial(params.m, &females, seed, params.iterations, params.tol)?;
            outcome.trial = trial;
            Ok(outcome)
        })
        .collect::<Result<Vec<_>>>()?;

    let converged = outcomes.iter().filter(|o| o.converged).count();
    let max_final_distance = outcomes.iter().map(|o| o.final_dist).fold(0.0, f64::max);
    let slowness = |o: &TrialOutcome| (!o.converged, o.steps.unwrap_or(usize::MAX));
    let worst_case = outcomes
        .iter()
        .max_by(|a, b| {
            slowness(a)
                .cmp(&slowness(b))
                .then(a.final_dist.total_cmp(&b.final_dist))
                // earliest trial wins ties
                .then(b.trial.cmp(&a.trial))
        })
        .cloned()
        .expect("trials >= 1");
    Ok(ConjectureReport {
        label: EVIDENCE_LABEL,
        parameters: params,
        trials,
        converged,
        max_final_distance,
        worst_case,
        outcomes,
    })
}
