//! Fixed points `V(x) = x`.
//!
//! The two-type family is solved in closed form. For general operators a
//! seeded multistart search combines plain iteration (which finds
//! attracting points) with a Levenberg-Marquardt descent on the residual
//! `|V(x) - x|^2` restricted to the simplex (which also finds repelling and
//! neutral ones).

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cubic::CubicMatrix;
use crate::dynamics::trajectory::Orbit;
use crate::error::Result;
use crate::operators::build_v0_m2;
use crate::simplex::{max_norm_distance, SimplexPoint, TOL_FIX, TOL_SUM};

/// Candidates closer than this in max norm are merged.
pub const CLUSTER_RADIUS: f64 = 1e-8;

const ITERATION_STEPS: usize = 500;
const LM_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointCandidate {
    pub point: Vec<f64>,
    /// `|V(x) - x|_inf`, with `V` evaluated as the raw quadratic form.
    pub residual: f64,
    pub in_simplex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub candidates: Vec<FixedPointCandidate>,
    #[serde(serialize_with = "serialize_point")]
    pub unique_in_simplex: Option<SimplexPoint>,
}

fn serialize_point<S: serde::Serializer>(
    p: &Option<SimplexPoint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    p.as_ref().map(SimplexPoint::coords).serialize(s)
}

impl FixedPointReport {
    pub fn in_simplex(&self) -> impl Iterator<Item = &FixedPointCandidate> {
        self.candidates.iter().filter(|c| c.in_simplex)
    }
}

/// Fixed points of the two-type operator with mixed offspring `(a, b, c)`.
///
/// Besides the empty-body vertex, when `bc != 0` the equation has the real
/// solution `((2bc - b - c) / 2bc, 1 / 2c, 1 / 2b)`, which never lies in
/// the simplex: its last two coordinates are both at most 1 only for
/// `b = c = 1/2`, and then its first coordinate is -1.
pub fn fixed_points_v0_m2(a: f64, b: f64, c: f64) -> Result<FixedPointReport> {
    let p = build_v0_m2(a, b, c)?;
    let e0 = SimplexPoint::vertex(3, 0)?;
    let mut candidates = vec![candidate(&p, e0.coords().to_vec())?];
    if b * c != 0.0 {
        let two_bc = 2.0 * b * c;
        let x_star = vec![(two_bc - b - c) / two_bc, 1.0 / (2.0 * c), 1.0 / (2.0 * b)];
        candidates.push(candidate(&p, x_star)?);
    }
    Ok(FixedPointReport {
        candidates,
        unique_in_simplex: Some(e0),
    })
}

/// Multistart search from `starts` seeded uniform-random simplex points.
///
/// Each start is iterated and the endpoint polished; the raw start is also
/// polished directly. Results with residual `<= TOL_FIX` are clustered
/// within [`CLUSTER_RADIUS`].
pub fn find_fixed_points(p: &CubicMatrix, starts: usize, seed: u64) -> Result<FixedPointReport> {
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<FixedPointCandidate> = Vec::new();
    for _ in 0..starts {
        let start = crate::analysis::uniform_simplex(n, &mut rng);
        let iterated = iterate_to_rest(p, &start)?;
        for seed_point in [iterated, start] {
            let polished = polish(p, seed_point)?;
            let c = candidate(p, polished)?;
            if c.residual <= TOL_FIX {
                found.push(c);
            }
        }
    }
    let clusters = cluster(found);
    let unique_in_simplex = match clusters.as_slice() {
        [only] => Some(SimplexPoint::new(only.point.clone())?),
        _ => None,
    };
    Ok(FixedPointReport {
        candidates: clusters,
        unique_in_simplex,
    })
}

fn candidate(p: &CubicMatrix, point: Vec<f64>) -> Result<FixedPointCandidate> {
    let residual = residual_inf(p, &point)?;
    let sum: f64 = point.iter().sum();
    let in_simplex = point.iter().all(|&c| c >= -TOL_SUM) && (sum - 1.0).abs() <= TOL_SUM;
    Ok(FixedPointCandidate {
        point,
        residual,
        in_simplex,
    })
}

fn residual_inf(p: &CubicMatrix, x: &[f64]) -> Result<f64> {
    let image = p.eval(x)?;
    Ok(max_norm_distance(&image, x))
}

fn iterate_to_rest(p: &CubicMatrix, start: &[f64]) -> Result<Vec<f64>> {
    let x0 = SimplexPoint::new(start.to_vec())?;
    let mut last = x0.clone();
    for item in Orbit::new(p, x0)?.take(ITERATION_STEPS) {
        let Ok(x) = item else { break };
        let settled = x.max_distance(&last) < 1e-15;
        last = x;
        if settled {
            break;
        }
    }
    Ok(last.into_coords())
}

fn project(x: &mut [f64]) {
    for c in x.iter_mut() {
        *c = c.max(0.0);
    }
    let sum: f64 = x.iter().sum();
    if sum > 0.0 {
        for c in x.iter_mut() {
            *c /= sum;
        }
    } else {
        x.fill(1.0 / x.len() as f64);
    }
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

/// Levenberg-Marquardt on `r(x) = V(x) - x`, with an extra row keeping the
/// step inside the hyperplane `sum x = 1` and a projection back onto the
/// simplex after each step.
fn polish(p: &CubicMatrix, mut x: Vec<f64>) -> Result<Vec<f64>> {
    let n = p.n();
    project(&mut x);
    let residual = |x: &[f64]| -> Result<Vec<f64>> {
        Ok(p.eval(x)?.iter().zip(x).map(|(v, c)| v - c).collect())
    };
    let mut r = residual(&x)?;
    let mut cost = sq_norm(&r);
    let mut mu = 1e-3;
    for _ in 0..LM_MAX_ITER {
        if r.iter().all(|c| c.abs() < 1e-15) {
            break;
        }
        let mut jac = DMatrix::from_row_slice(n, n, &p.jacobian(&x));
        for d in 0..n {
            jac[(d, d)] -= 1.0;
        }
        let ones = DMatrix::from_element(n, n, 1.0);
        let normal = jac.transpose() * &jac + ones;
        let rhs = -(jac.transpose() * DVector::from_column_slice(&r));

        let mut improved = false;
        while mu < 1e12 {
            let damped = &normal + DMatrix::identity(n, n) * mu;
            let Some(chol) = damped.cholesky() else {
                mu *= 4.0;
                continue;
            };
            let delta = chol.solve(&rhs);
            let mut trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            project(&mut trial);
            let r_trial = residual(&trial)?;
            let trial_cost = sq_norm(&r_trial);
            if trial_cost < cost {
                x = trial;
                r = r_trial;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Ok(x)
}

/// Greedy clustering, best residual first; each cluster keeps its best member.
fn cluster(mut found: Vec<FixedPointCandidate>) -> Vec<FixedPointCandidate> {
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut reps: Vec<FixedPointCandidate> = Vec::new();
    for c in found {
        if !reps
            .iter()
            .any(|r| max_norm_distance(&r.point, &c.point) <= CLUSTER_RADIUS)
        {
            reps.push(c);
        }
    }
    // lexicographically descending, so the empty-body vertex leads
    reps.sort_by(|a, b| {
        b.point
            .partial_cmp(&a.point)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_v1, ganikhodzhaev_v0, V1Coefficients};

    #[test]
    fn two_type_closed_form_candidates() {
        let report = fixed_points_v0_m2(0.0, 0.5, 0.5).unwrap();
        assert_eq!(report.candidates.len(), 2);
        assert_eq!(report.candidates[0].point, vec![1.0, 0.0, 0.0]);
        assert!(report.candidates[0].in_simplex);
        assert_eq!(report.candidates[1].point, vec![-1.0, 1.0, 1.0]);
        assert!(!report.candidates[1].in_simplex);
        assert!(report.candidates[1].residual < 1e-15);

        let report = fixed_points_v0_m2(1.0, 0.0, 0.0).unwrap();
        assert_eq!(report.candidates.len(), 1);

        let third = 1.0 / 3.0;
        let report = fixed_points_v0_m2(third, third, third).unwrap();
        let x_star = &report.candidates[1].point;
        for (got, want) in x_star.iter().zip([-2.0, 1.5, 1.5]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(!report.candidates[1].in_simplex);
        assert_eq!(report.unique_in_simplex, SimplexPoint::vertex(3, 0).ok());
    }

    #[test]
    fn search_finds_single_vertex_for_two_type() {
        let p = build_v0_m2(0.0, 0.5, 0.5).unwrap();
        let report = find_fixed_points(&p, 100, 1).unwrap();
        assert_eq!(report.candidates.len(), 1, "{report:?}");
        assert_eq!(report.unique_in_simplex, SimplexPoint::vertex(3, 0).ok());
    }

    #[test]
    fn search_finds_single_vertex_for_single_male() {
        let coeffs = V1Coefficients::uniform(5).unwrap();
        let report = find_fixed_points(&build_v1(&coeffs).unwrap(), 100, 2).unwrap();
        assert_eq!(report.candidates.len(), 1, "{report:?}");
        assert_eq!(report.unique_in_simplex, SimplexPoint::vertex(6, 0).ok());
    }

    #[test]
    fn search_finds_vertices_and_barycenter_of_volterra_preset() {
        let p = ganikhodzhaev_v0();
        let report = find_fixed_points(&p, 100, 3).unwrap();
        let has = |target: &[f64]| {
            report
                .candidates
                .iter()
                .any(|c| max_norm_distance(&c.point, target) <= CLUSTER_RADIUS)
        };
        let third = 1.0 / 3.0;
        assert!(has(&[third, third, third]), "{report:?}");
        assert!(has(&[1.0, 0.0, 0.0]), "{report:?}");
        assert!(has(&[0.0, 1.0, 0.0]), "{report:?}");
        assert!(has(&[0.0, 0.0, 1.0]), "{report:?}");
        assert_eq!(report.candidates.len(), 4);
        assert!(report.unique_in_simplex.is_none());
        for c in &report.candidates {
            assert!(c.residual <= TOL_FIX);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let p = ganikhodzhaev_v0();
        assert_eq!(
            find_fixed_points(&p, 20, 9).unwrap(),
            find_fixed_points(&p, 20, 9).unwrap()
        );
    }
}
