use serde::Serialize;

use crate::classify::matches_f_qso;
use crate::cubic::CubicMatrix;
use crate::dynamics::lyapunov::{phi_of, PHI_FLOOR};
use crate::error::{QsoError, Result};
use crate::simplex::{max_norm_distance, SimplexPoint};

/// Iterator over `x^(0), V x^(0), V^2 x^(0), ...`.
///
/// For F-QSOs with `M = {1}` (where `phi` is a certified Lyapunov
/// functional), once `phi(x^(n)) < PHI_FLOOR` every non-empty coordinate of
/// `x^(n+1)` is below `2 * PHI_FLOOR`, and `x^(n+1)` is replaced by the
/// exact empty-body vertex.
///
/// A failed renormalization is yielded once as `Err`, then the orbit ends.
pub struct Orbit<'a> {
    p: &'a CubicMatrix,
    next: Option<Result<SimplexPoint>>,
    snap: bool,
    snapped_at: Option<usize>,
    index: usize,
}

impl<'a> Orbit<'a> {
    pub fn new(p: &'a CubicMatrix, x0: SimplexPoint) -> Result<Self> {
        if x0.dim() != p.n() {
            return Err(QsoError::DimensionMismatch {
                expected: p.n(),
                found: x0.dim(),
            });
        }
        Ok(Self {
            p,
            next: Some(Ok(x0)),
            snap: single_male_shape(p),
            snapped_at: None,
            index: 0,
        })
    }

    /// Step index of the first point replaced by the vertex, if any.
    pub fn snapped_at(&self) -> Option<usize> {
        self.snapped_at
    }
}

impl Iterator for Orbit<'_> {
    type Item = Result<SimplexPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = match self.next.take()? {
            Ok(x) => x,
            Err(e) => return Some(Err(e)),
        };
        self.index += 1;
        let mut upcoming = self.p.apply(&current);
        if self.snap && phi_of(current.coords()) < PHI_FLOOR {
            let vertex = SimplexPoint::vertex(self.p.n(), 0);
            if upcoming.as_ref().ok() != vertex.as_ref().ok() {
                self.snapped_at.get_or_insert(self.index);
                upcoming = vertex;
            }
        }
        self.next = Some(upcoming);
        Some(Ok(current))
    }
}

/// F-QSO with a single male at state 1 and all other non-empty states female.
pub(crate) fn single_male_shape(p: &CubicMatrix) -> bool {
    let n = p.n();
    n >= 3 && matches_f_qso(p, &(2..n).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    MaxSteps,
    Converged { tol: f64 },
    InvalidState,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::MaxSteps => write!(f, "max_steps"),
            StopReason::Converged { tol } => write!(f, "converged({tol:e})"),
            StopReason::InvalidState => write!(f, "invalid_state"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<SimplexPoint>,
    /// `phi(points[n])`; `None` for operators on fewer than three states.
    pub phi_values: Option<Vec<f64>>,
    /// Max-norm distance of each point to the reference, when one was given.
    pub dist_to_limit: Option<Vec<f64>>,
    pub reference: Option<SimplexPoint>,
    pub stop_reason: StopReason,
    /// First step replaced by the exact vertex (see [`Orbit`]).
    pub snapped_at: Option<usize>,
}

impl Trajectory {
    pub fn last(&self) -> &SimplexPoint {
        self.points
            .last()
            .expect("a trajectory holds at least x^(0)")
    }

    /// Number of applied steps.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Iterates `p` from `x0` for at most `max_steps` steps.
///
/// With a reference point the run stops once the max-norm distance to it is
/// `<= tol` (checked from step 0). Without one it stops once two consecutive
/// points are within `tol`.
pub fn trajectory(
    p: &CubicMatrix,
    x0: SimplexPoint,
    max_steps: usize,
    tol: f64,
    reference: Option<SimplexPoint>,
) -> Result<Trajectory> {
    if max_steps == 0 {
        return Err(QsoError::InvalidParameter("max_steps must be >= 1".into()));
    }
    if let Some(r) = &reference {
        if r.dim() != p.n() {
            return Err(QsoError::DimensionMismatch {
                expected: p.n(),
                found: r.dim(),
            });
        }
    }
    let with_phi = p.n() >= 3;
    let mut orbit = Orbit::new(p, x0)?;
    let mut points: Vec<SimplexPoint> = Vec::new();
    let mut phi_values = Vec::new();
    let mut dists = Vec::new();
    let mut stop_reason = StopReason::MaxSteps;

    for item in orbit.by_ref().take(max_steps + 1) {
        let Ok(x) = item else {
            stop_reason = StopReason::InvalidState;
            break;
        };
        if with_phi {
            phi_values.push(phi_of(x.coords()));
        }
        let converged = match &reference {
            Some(r) => {
                let d = x.max_distance(r);
                dists.push(d);
                d <= tol
            }
            None => points
                .last()
                .is_some_and(|prev: &SimplexPoint| prev.max_distance(&x) <= tol),
        };
        points.push(x);
        if converged {
            stop_reason = StopReason::Converged { tol };
            break;
        }
    }

    let snapped_at = orbit.snapped_at().filter(|&s| s < points.len());
    Ok(Trajectory {
        points,
        phi_values: with_phi.then_some(phi_values),
        dist_to_limit: reference.as_ref().map(|_| dists),
        reference,
        stop_reason,
        snapped_at,
    })
}

/// Running Cesàro means `(1/n) sum_{j<n} x^(j)` at each requested `n`.
///
/// `checkpoints` must be nonempty, strictly increasing and start at `>= 1`.
pub fn cesaro_averages(
    p: &CubicMatrix,
    x0: SimplexPoint,
    checkpoints: &[usize],
) -> Result<Vec<(usize, SimplexPoint)>> {
    if checkpoints.first().is_none_or(|&n| n == 0) || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QsoError::InvalidParameter(
            "checkpoints must be increasing and start at 1 or more".into(),
        ));
    }
    let dim = p.n();
    let last = *checkpoints.last().expect("checked nonempty");
    let mut sum = vec![0.0; dim];
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut pending = checkpoints.iter().peekable();
    for (j, item) in Orbit::new(p, x0)?.take(last).enumerate() {
        let x = item?;
        for (s, c) in sum.iter_mut().zip(x.coords()) {
            *s += c;
        }
        let count = j + 1;
        if pending.next_if_eq(&&count).is_some() {
            let avg: Vec<f64> = sum.iter().map(|s| s / count as f64).collect();
            // long sums can drift past TOL_SUM; fall back to renormalizing
            let point =
                SimplexPoint::new(avg.clone()).or_else(|_| SimplexPoint::renormalize(&avg))?;
            out.push((count, point));
        }
    }
    Ok(out)
}

pub fn cesaro_average(p: &CubicMatrix, x0: SimplexPoint, n: usize) -> Result<SimplexPoint> {
    let mut averages = cesaro_averages(p, x0, &[n])?;
    Ok(averages.pop().expect("one checkpoint requested").1)
}

/// Checkpoints `1, 2, 5, 10, 20, 50, ...` up to and including `n`.
pub fn log_schedule(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let v = decade.saturating_mul(m);
            if v >= n {
                break 'outer;
            }
            out.push(v);
        }
        decade = decade.saturating_mul(10);
    }
    if n >= 1 {
        out.push(n);
    }
    out
}

/// Distance between consecutive points, for callers without a reference.
pub fn step_sizes(t: &Trajectory) -> Vec<f64> {
    t.points
        .windows(2)
        .map(|w| max_norm_distance(w[0].coords(), w[1].coords()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_v0_m2, build_v1, ganikhodzhaev_v0, V1Coefficients};

    fn pt(v: &[f64]) -> SimplexPoint {
        SimplexPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_type_converges_quickly() {
        let p = build_v0_m2(0.0, 0.5, 0.5).unwrap();
        let e0 = SimplexPoint::vertex(3, 0).unwrap();
        let t = trajectory(&p, pt(&[0.0, 0.5, 0.5]), 100, 1e-9, Some(e0)).unwrap();
        assert_eq!(t.stop_reason, StopReason::Converged { tol: 1e-9 });
        assert!(t.steps() <= 6, "took {} steps", t.steps());
        assert_eq!(t.points[1].coords(), &[0.5, 0.25, 0.25]);
        let phi = t.phi_values.as_ref().unwrap();
        assert_eq!(phi[1], 0.0625);
        for (n, w) in t.points.windows(2).enumerate() {
            if t.snapped_at != Some(n + 1) {
                assert_eq!(p.apply(&w[0]).unwrap(), w[1]);
            }
        }
    }

    #[test]
    fn fixed_vertex_converges_at_step_zero() {
        let p = build_v1(&V1Coefficients::uniform(4).unwrap()).unwrap();
        let e0 = SimplexPoint::vertex(5, 0).unwrap();
        let t = trajectory(&p, e0.clone(), 10, 1e-9, Some(e0)).unwrap();
        assert_eq!(t.steps(), 0);
        assert_eq!(t.stop_reason, StopReason::Converged { tol: 1e-9 });
    }

    #[test]
    fn no_reference_uses_step_size() {
        let p = build_v0_m2(0.2, 0.4, 0.4).unwrap();
        let t = trajectory(&p, pt(&[0.1, 0.6, 0.3]), 100, 1e-12, None).unwrap();
        assert!(matches!(t.stop_reason, StopReason::Converged { .. }));
        assert!(t.dist_to_limit.is_none());
        assert!(*step_sizes(&t).last().unwrap() <= 1e-12);
    }

    #[test]
    fn male_free_start_is_absorbed_in_one_step() {
        let coeffs = V1Coefficients::new(3, vec![vec![0.1, 0.0, 0.6, 0.3]; 2]).unwrap();
        let p = build_v1(&coeffs).unwrap();
        let t = trajectory(
            &p,
            pt(&[0.2, 0.0, 0.5, 0.3]),
            5,
            0.0,
            SimplexPoint::vertex(4, 0).ok(),
        )
        .unwrap();
        assert_eq!(t.points[1].coords(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.steps(), 1);
    }

    #[test]
    fn zero_male_offspring_does_not_snap_early() {
        // x_1 dies out after one step while females survive one more
        let coeffs = V1Coefficients::new(2, vec![vec![0.0, 0.0, 1.0]]).unwrap();
        let p = build_v1(&coeffs).unwrap();
        let t = trajectory(
            &p,
            pt(&[0.0, 0.5, 0.5]),
            5,
            0.0,
            SimplexPoint::vertex(3, 0).ok(),
        )
        .unwrap();
        assert_eq!(t.points[1].coords(), &[0.5, 0.0, 0.5]);
        assert_eq!(t.points[2].coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(t.snapped_at, None);
    }

    #[test]
    fn volterra_preset_stays_away_from_barycenter() {
        let p = ganikhodzhaev_v0();
        let c = SimplexPoint::uniform(3).unwrap();
        let x0 = pt(&[1.0 / 3.0 + 1e-3, 1.0 / 3.0 - 1e-3, 1.0 / 3.0]);
        let t = trajectory(&p, x0, 10_000, 1e-9, Some(c)).unwrap();
        assert_eq!(t.stop_reason, StopReason::MaxSteps);
        assert_eq!(t.steps(), 10_000);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = build_v0_m2(0.0, 0.5, 0.5).unwrap();
        assert!(trajectory(&p, pt(&[0.5, 0.5]), 3, 1e-9, None).is_err());
        assert!(trajectory(&p, pt(&[0.5, 0.25, 0.25]), 0, 1e-9, None).is_err());
    }

    #[test]
    fn cesaro_examples() {
        let p = build_v0_m2(0.3, 0.3, 0.4).unwrap();
        let x0 = pt(&[0.1, 0.45, 0.45]);
        assert_eq!(cesaro_average(&p, x0.clone(), 1).unwrap(), x0);
        let e0 = SimplexPoint::vertex(3, 0).unwrap();
        for n in [1, 7, 100] {
            assert_eq!(cesaro_average(&p, e0.clone(), n).unwrap(), e0);
        }
        let avg = cesaro_average(&p, x0, 1000).unwrap();
        assert!(avg.max_distance(&e0) < 1e-2);
        assert!(cesaro_averages(&p, e0.clone(), &[]).is_err());
        assert!(cesaro_averages(&p, e0.clone(), &[0, 3]).is_err());
        assert!(cesaro_averages(&p, e0, &[3, 3]).is_err());
    }

    #[test]
    fn log_schedule_shape() {
        assert_eq!(log_schedule(1), vec![1]);
        assert_eq!(
            log_schedule(2000),
            vec![1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000]
        );
        assert_eq!(log_schedule(7), vec![1, 2, 5, 7]);
    }
}
