//! Volterra operators in skew-symmetric canonical form.
//!
//! A Volterra QSO only ever produces a child of one of its parents' types.
//! Such an operator is determined by the skew matrix
//! `a[k][i] = 2 p[i][k][k] - 1` (row = surviving child `k`) and acts as
//! `x'_k = x_k (1 + sum_i a[k][i] x_i)`.

use crate::classify::is_volterra;
use crate::cubic::{CubicMatrix, RawCubic};
use crate::error::{QsoError, Result};
use crate::simplex::SimplexPoint;

#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    m: usize,
    a: Vec<f64>,
}

impl SkewMatrix {
    /// Row-major `m x m` entries; skew-symmetry is checked exactly.
    pub fn new(m: usize, a: Vec<f64>) -> Result<Self> {
        if m < 2 || a.len() != m * m {
            return Err(QsoError::InvalidParameter(format!(
                "skew matrix needs m >= 2 and m^2 entries (m = {m}, {} given)",
                a.len()
            )));
        }
        for k in 0..m {
            for i in 0..m {
                let v = a[k * m + i];
                if !v.is_finite() || v.abs() > 1.0 {
                    return Err(QsoError::InvalidParameter(format!(
                        "a[{k}][{i}] = {v} is outside [-1, 1]"
                    )));
                }
                if v != -a[i * m + k] {
                    return Err(QsoError::InvalidParameter(format!(
                        "a[{k}][{i}] = {v} is not the negative of a[{i}][{k}]"
                    )));
                }
            }
        }
        Ok(Self { m, a })
    }

    /// Builds from the strict upper triangle, `upper(k, i)` for `k < i`.
    pub fn from_upper(m: usize, mut upper: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut a = vec![0.0; m * m];
        for k in 0..m {
            for i in (k + 1)..m {
                let v = upper(k, i);
                a[k * m + i] = v;
                a[i * m + k] = -v;
            }
        }
        Self::new(m, a)
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(m, vec![0.0; m * m])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.a[k * self.m + i]
    }

    /// Reconstructs the heredity coefficients:
    /// `p[i][k][k] = (1 + a[k][i]) / 2` and `p[k][k][k] = 1`.
    pub fn to_cubic(&self) -> Result<CubicMatrix> {
        let m = self.m;
        let mut p = RawCubic::zeros(m)?;
        for k in 0..m {
            p.set(k, k, k, 1.0);
            for i in (k + 1)..m {
                let keep_k = 0.5 * (1.0 + self.get(k, i));
                p.set_symmetric(i, k, k, keep_k);
                p.set_symmetric(i, k, i, 1.0 - keep_k);
            }
        }
        p.try_into()
    }
}

/// Evaluator for the canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraOperator {
    skew: SkewMatrix,
}

impl VolterraOperator {
    pub fn skew(&self) -> &SkewMatrix {
        &self.skew
    }

    pub fn apply(&self, x: &SimplexPoint) -> Result<SimplexPoint> {
        let m = self.skew.m;
        if x.dim() != m {
            return Err(QsoError::DimensionMismatch {
                expected: m,
                found: x.dim(),
            });
        }
        let xs = x.coords();
        let image: Vec<f64> = (0..m)
            .map(|k| {
                let drift: f64 = (0..m).map(|i| self.skew.get(k, i) * xs[i]).sum();
                xs[k] * (1.0 + drift)
            })
            .collect();
        SimplexPoint::renormalize(&image)
    }
}

pub fn volterra_from_skew(skew: SkewMatrix) -> VolterraOperator {
    VolterraOperator { skew }
}

/// Reads `a[k][i] = p[i][k][k] - p[i][k][i]`, which equals
/// `2 p[i][k][k] - 1` for exact stochastic data and is exactly skew.
pub fn skew_from_cubic(p: &CubicMatrix) -> Result<SkewMatrix> {
    if !is_volterra(p) {
        return Err(QsoError::NotVolterra);
    }
    SkewMatrix::from_upper(p.n(), |k, i| {
        (p.get(i, k, k) - p.get(i, k, i)).clamp(-1.0, 1.0)
    })
}
