//! Points of the probability simplex.
//!
//! A [`SimplexPoint`] is a probability vector over `dim` states. All
//! constructors clamp coordinates that are negative within [`TOL_SUM`] to
//! zero, so stored coordinates are always `>= 0`.

use std::fmt;

use crate::error::{QsoError, Result};

/// Tolerance on stochasticity and simplex sums.
pub const TOL_SUM: f64 = 1e-12;

/// Tolerance on fixed-point residuals `|V(x) - x|_inf`.
pub const TOL_FIX: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    /// Accepts coordinates already on the simplex (within [`TOL_SUM`]).
    ///
    /// Tiny negative entries are clamped to zero; the remaining coordinates
    /// are kept bit-for-bit, so a point survives a round trip through `new`
    /// unchanged.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_raw(&coords)?;
        let sum: f64 = coords.iter().map(|c| c.max(0.0)).sum();
        if (sum - 1.0).abs() > TOL_SUM {
            return Err(QsoError::InvalidPoint(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c.max(0.0)).collect(),
        })
    }

    /// Clamps near-zero negatives and divides by the coordinate sum.
    pub fn renormalize(raw: &[f64]) -> Result<Self> {
        check_raw(raw)?;
        let clamped: Vec<f64> = raw.iter().map(|c| c.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(QsoError::InvalidPoint(format!(
                "coordinate sum {sum} is not positive"
            )));
        }
        Ok(Self {
            coords: clamped.into_iter().map(|c| c / sum).collect(),
        })
    }

    /// The vertex `e_k` (all mass on state `k`).
    pub fn vertex(dim: usize, k: usize) -> Result<Self> {
        if dim < 2 || k >= dim {
            return Err(QsoError::InvalidPoint(format!(
                "vertex {k} does not exist in dimension {dim}"
            )));
        }
        let mut coords = vec![0.0; dim];
        coords[k] = 1.0;
        Ok(Self { coords })
    }

    /// The barycenter `(1/dim, ..., 1/dim)`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(QsoError::InvalidPoint(format!(
                "dimension {dim} is below 2"
            )));
        }
        Ok(Self {
            coords: vec![1.0 / dim as f64; dim],
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn max_distance(&self, other: &SimplexPoint) -> f64 {
        max_norm_distance(&self.coords, &other.coords)
    }

    /// Total-variation distance, half the 1-norm of the difference.
    pub fn tv_distance(&self, other: &SimplexPoint) -> f64 {
        0.5 * self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn max_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check_raw(coords: &[f64]) -> Result<()> {
    if coords.len() < 2 {
        return Err(QsoError::InvalidPoint(format!(
            "dimension {} is below 2",
            coords.len()
        )));
    }
    if let Some((i, c)) = coords
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_finite() || **c < -TOL_SUM)
    {
        return Err(QsoError::InvalidPoint(format!(
            "coordinate {i} = {c} is negative or not finite"
        )));
    }
    Ok(())
}
