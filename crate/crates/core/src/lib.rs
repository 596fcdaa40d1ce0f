//! Quadratic stochastic operators (QSOs) on the probability simplex.
//!
//! The crate centers on F-QSOs: operators on states `0..=m` where state 0
//! is an absorbing "empty body", the other states are split into females
//! and males, and only female-male pairs produce non-empty offspring.
//!
//! * [`cubic`], [`simplex`], [`classify`]: heredity matrices, points and
//!   operator-class detection.
//! * [`operators`]: builders for F-QSOs, the Volterra canonical form and
//!   named presets.
//! * [`dynamics`]: trajectories, the Lyapunov functional `phi` and its
//!   bounds, convergence certificates, fixed points and Cesàro averages.
//! * [`analysis`]: first-row counting, random F-QSO sampling and the
//!   randomized convergence scanner.
//! * [`cli`]: operator documents, CSV output and the commands behind the
//!   `qso` binary.
//!
//! Runnable walkthroughs live in this crate's `examples/` directory.

// NaN has to fail every range check, hence `!(x <= tol)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod classify;
pub mod cli;
pub mod cubic;
pub mod dynamics;
pub mod error;
pub mod operators;
pub mod simplex;

pub use classify::{classify, ClassReport};
pub use cubic::{validate_stochastic, CubicMatrix, RawCubic, StochasticityReport};
pub use error::{QsoError, Result};
pub use simplex::{SimplexPoint, TOL_FIX, TOL_SUM};
