//! Stepwise convergence certificate for F-QSOs with a single male.
//!
//! Along a trajectory of such an operator the following hold at every step:
//!
//! * `phi(x^(n)) <= (1/4)^(2^n)`;
//! * `phi(x^(n+1)) <= phi(x^(n))^2`;
//! * `x_k^(n+1) <= 2 phi(x^(n))` for every non-empty state `k`;
//! * with two non-empty states, `x_1^(n+1) = 2 b phi(x^(n))` exactly, where
//!   `b = p[1][2][1]`.
//!
//! For other F-QSOs the same quantities are recorded but carry no guarantee.

use serde::Serialize;

use crate::classify::classify;
use crate::cubic::CubicMatrix;
use crate::dynamics::lyapunov::{phi_of, phi_upper_bound, PhiBound};
use crate::dynamics::trajectory::{single_male_shape, Orbit};
use crate::error::{QsoError, Result};
use crate::simplex::SimplexPoint;

const BOUND_SLACK: f64 = 1e-15;
const COORD_SLACK: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Single male at state 1: the inequalities are theorems.
    Certified,
    /// Any other F-QSO: the inequalities are observations only.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStep {
    pub step: usize,
    pub phi: f64,
    pub bound: PhiBound,
    /// `phi <= bound + 1e-15`.
    pub bound_ok: bool,
    /// `phi <= phi_prev^2 + 1e-15`; `None` at step 0.
    pub square_ok: Option<bool>,
    /// `max_{k >= 1} x_k <= 2 phi_prev + 1e-12`; `None` at step 0.
    pub coordinate_ok: Option<bool>,
    /// `|x_1 - 2 b phi_prev|` for two non-empty states, from step 1.
    pub male_identity_residual: Option<f64>,
    /// `max_{k >= 1} x_k`, the max-norm distance to the empty-body vertex.
    pub non_empty_max: f64,
}

impl ConvergenceStep {
    pub fn passes(&self) -> bool {
        self.bound_ok
            && self.square_ok.unwrap_or(true)
            && self.coordinate_ok.unwrap_or(true)
            && self
                .male_identity_residual
                .is_none_or(|r| r <= IDENTITY_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub certification: Certification,
    pub steps: Vec<ConvergenceStep>,
    /// First step with every non-empty coordinate `<= tol`.
    pub first_below_tol: Option<usize>,
}

impl ConvergenceReport {
    pub fn all_checks_pass(&self) -> bool {
        self.steps.iter().all(ConvergenceStep::passes)
    }

    pub fn first_failure(&self) -> Option<&ConvergenceStep> {
        self.steps.iter().find(|s| !s.passes())
    }
}

/// Runs `n_max` steps from `x0` and checks the certificate at each one.
pub fn convergence_report(
    p: &CubicMatrix,
    x0: SimplexPoint,
    n_max: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    let n = p.n();
    let certification = if single_male_shape(p) {
        Certification::Certified
    } else if n >= 3 && classify(p).is_f_qso() {
        Certification::Empirical
    } else {
        return Err(QsoError::Classification(
            "convergence certificates need an F-QSO on at least 3 states".into(),
        ));
    };
    let male_b = (n == 3).then(|| p.get(1, 2, 1));

    let mut steps: Vec<ConvergenceStep> = Vec::with_capacity(n_max + 1);
    let mut first_below_tol = None;
    for (step, item) in Orbit::new(p, x0)?.take(n_max + 1).enumerate() {
        let x = item?;
        let coords = x.coords();
        let phi = phi_of(coords);
        let bound = phi_upper_bound(step.min(u32::MAX as usize) as u32);
        let non_empty_max = coords[1..].iter().copied().fold(0.0, f64::max);
        let prev_phi = steps.last().map(|s| s.phi);
        steps.push(ConvergenceStep {
            step,
            phi,
            bound,
            bound_ok: phi <= bound.value + BOUND_SLACK,
            square_ok: prev_phi.map(|q| phi <= q * q + BOUND_SLACK),
            coordinate_ok: prev_phi.map(|q| non_empty_max <= 2.0 * q + COORD_SLACK),
            male_identity_residual: prev_phi
                .zip(male_b)
                .map(|(q, b)| (coords[1] - 2.0 * b * q).abs()),
            non_empty_max,
        });
        if first_below_tol.is_none() && non_empty_max <= tol {
            first_below_tol = Some(step);
        }
    }
    Ok(ConvergenceReport {
        certification,
        steps,
        first_below_tol,
    })
}
