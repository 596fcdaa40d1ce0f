//! Cubic matrices of heredity coefficients `p[i][j][k]`.
//!
//! [`RawCubic`] holds arbitrary coefficients and can be checked with
//! [`validate_stochastic`]. A [`CubicMatrix`] is a `RawCubic` that passed
//! the check: symmetric in the parent pair, nonnegative, and with every
//! offspring distribution `p[i][j][.]` summing to one.

use serde::Serialize;

use crate::error::{QsoError, Result};
use crate::simplex::{SimplexPoint, TOL_SUM};

/// Heredity coefficients with no stochasticity guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCubic {
    n: usize,
    entries: Vec<f64>,
}

impl RawCubic {
    /// Flat storage in `(i, j, k)` row-major order, `n^3` values.
    pub fn from_flat(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(QsoError::Structural(format!("state count {n} is below 2")));
        }
        if entries.len() != n * n * n {
            return Err(QsoError::Structural(format!(
                "expected {} entries for n = {n}, found {}",
                n * n * n,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    /// Nested storage `p[i][j][k]`; every extent must equal `n`.
    pub fn from_nested(n: usize, nested: &[Vec<Vec<f64>>]) -> Result<Self> {
        if nested.len() != n {
            return Err(QsoError::Structural(format!(
                "outer extent {} does not match n = {n}",
                nested.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n * n);
        for (i, plane) in nested.iter().enumerate() {
            if plane.len() != n {
                return Err(QsoError::Structural(format!(
                    "p[{i}] has extent {}, expected {n}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return Err(QsoError::Structural(format!(
                        "p[{i}][{j}] has extent {}, expected {n}",
                        row.len()
                    )));
                }
                entries.extend_from_slice(row);
            }
        }
        Self::from_flat(n, entries)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_flat(n, vec![0.0; n * n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let idx = self.index(i, j, k);
        self.entries[idx] = value;
    }

    /// Writes `value` at both `(i, j, k)` and `(j, i, k)`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.set(i, j, k, value);
        self.set(j, i, k, value);
    }

    /// Replaces each `p[i][j][k]` with the mean of it and `p[j][i][k]`.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let mean = 0.5 * (self.get(i, j, k) + self.get(j, i, k));
                    self.set_symmetric(i, j, k, mean);
                }
            }
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `p[i][j][k]` is negative or not finite.
    Negative {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
    /// `p[i][j][k] != p[j][i][k]`; reported once per pair with `i < j`.
    Asymmetric {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    /// `sum_k p[i][j][k]` differs from 1 by more than [`TOL_SUM`].
    RowSum { i: usize, j: usize, residual: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Negative { i, j, k, value } => {
                write!(f, "p[{i}][{j}][{k}] = {value} is negative or not finite")
            }
            Violation::Asymmetric { i, j, k, residual } => write!(
                f,
                "p[{i}][{j}][{k}] and p[{j}][{i}][{k}] differ by {residual:e}"
            ),
            Violation::RowSum { i, j, residual } => write!(
                f,
                "offspring distribution of pair ({i}, {j}) sums to 1 {residual:+e}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticityReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks symmetry, nonnegativity and unit offspring sums, listing every
/// violation with its magnitude.
pub fn validate_stochastic(p: &RawCubic) -> StochasticityReport {
    let n = p.n();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = p.get(i, j, k);
                if !v.is_finite() || v < 0.0 {
                    violations.push(Violation::Negative { i, j, k, value: v });
                }
                if i < j {
                    let w = p.get(j, i, k);
                    if v != w {
                        violations.push(Violation::Asymmetric {
                            i,
                            j,
                            k,
                            residual: (v - w).abs(),
                        });
                    }
                }
            }
            let sum: f64 = (0..n).map(|k| p.get(i, j, k)).sum();
            let residual = sum - 1.0;
            if !(residual.abs() <= TOL_SUM) {
                violations.push(Violation::RowSum { i, j, residual });
            }
        }
    }
    StochasticityReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// A validated quadratic stochastic operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicMatrix {
    raw: RawCubic,
}

impl TryFrom<RawCubic> for CubicMatrix {
    type Error = QsoError;

    fn try_from(raw: RawCubic) -> Result<Self> {
        let report = validate_stochastic(&raw);
        if report.ok {
            Ok(Self { raw })
        } else {
            Err(QsoError::NotStochastic(Box::new(report)))
        }
    }
}

impl CubicMatrix {
    pub fn from_flat(n: usize, entries: Vec<f64>) -> Result<Self> {
        RawCubic::from_flat(n, entries)?.try_into()
    }

    pub fn n(&self) -> usize {
        self.raw.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.raw.get(i, j, k)
    }

    pub fn raw(&self) -> &RawCubic {
        &self.raw
    }

    /// Evaluates the quadratic form `x'_k = sum_{i,j} p[i][j][k] x_i x_j`
    /// on an arbitrary real vector, without renormalization.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if x.len() != n {
            return Err(QsoError::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * x[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for (o, p) in out.iter_mut().zip(&self.raw.entries[base..base + n]) {
                    *o += p * w;
                }
            }
        }
        Ok(out)
    }

    /// One generation of the operator: the quadratic form followed by
    /// renormalization onto the simplex.
    pub fn apply(&self, x: &SimplexPoint) -> Result<SimplexPoint> {
        let image = self.eval(x.coords())?;
        SimplexPoint::renormalize(&image)
    }

    /// Jacobian `d x'_k / d x_l = 2 sum_j p[l][j][k] x_j`, row-major `[k][l]`.
    pub fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut jac = vec![0.0; n * n];
        for l in 0..n {
            for (j, xj) in x.iter().enumerate() {
                if *xj == 0.0 {
                    continue;
                }
                for k in 0..n {
                    jac[k * n + l] += 2.0 * self.get(l, j, k) * xj;
                }
            }
        }
        jac
    }
}
