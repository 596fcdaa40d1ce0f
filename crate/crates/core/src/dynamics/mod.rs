//! Trajectories, fixed points and convergence certificates.

mod certificate;
mod fixed_points;
mod lyapunov;
mod trajectory;

pub use certificate::{convergence_report, Certification, ConvergenceReport, ConvergenceStep};
pub use fixed_points::{
    find_fixed_points, fixed_points_v0_m2, FixedPointCandidate, FixedPointReport, CLUSTER_RADIUS,
};
pub use lyapunov::{phi, phi_closed_form, phi_upper_bound, PhiBound, PHI_FLOOR};
pub(crate) use trajectory::single_male_shape;
pub use trajectory::{
    cesaro_average, cesaro_averages, log_schedule, step_sizes, trajectory, Orbit, StopReason,
    Trajectory,
};
