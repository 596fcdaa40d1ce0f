//! F-quadratic stochastic operators.
//!
//! States are `0..n`, with 0 the empty body. The remaining states split
//! into females `F` and males `M`. A pair drawn from the same class (with
//! 0 counting as a member of both) always yields the empty body; a
//! female-male pair yields offspring according to a free distribution.

use std::collections::BTreeMap;

use crate::cubic::{CubicMatrix, RawCubic};
use crate::error::{QsoError, Result};
use crate::simplex::TOL_SUM;

/// Compact description of an F-QSO.
///
/// Mixed distributions are keyed by `(female, male)`; expansion writes both
/// parent orders.
#[derive(Debug, Clone, PartialEq)]
pub struct FQsoSpec {
    n: usize,
    females: Vec<usize>,
    mixed: BTreeMap<(usize, usize), Vec<f64>>,
}

impl FQsoSpec {
    pub fn new(
        n: usize,
        females: &[usize],
        mixed: BTreeMap<(usize, usize), Vec<f64>>,
    ) -> Result<Self> {
        let females = check_partition(n, females)?;
        let males = complement(n, &females);
        for &f in &females {
            for &m in &males {
                let dist = mixed.get(&(f, m)).ok_or_else(|| {
                    QsoError::InvalidSpec(format!("missing mixed distribution for ({f}, {m})"))
                })?;
                check_distribution(n, dist)
                    .map_err(|e| QsoError::InvalidSpec(format!("pair ({f}, {m}): {e}")))?;
            }
        }
        if mixed.len() != females.len() * males.len() {
            let stray = mixed
                .keys()
                .find(|(f, m)| !females.contains(f) || !males.contains(m))
                .copied();
            return Err(QsoError::InvalidSpec(format!(
                "mixed key {stray:?} is not a (female, male) pair"
            )));
        }
        Ok(Self { n, females, mixed })
    }

    /// Builds a spec by calling `dist(female, male)` for every mixed pair.
    pub fn from_fn(
        n: usize,
        females: &[usize],
        mut dist: impl FnMut(usize, usize) -> Vec<f64>,
    ) -> Result<Self> {
        let females = check_partition(n, females)?;
        let males = complement(n, &females);
        let mut mixed = BTreeMap::new();
        for &f in &females {
            for &m in &males {
                mixed.insert((f, m), dist(f, m));
            }
        }
        Self::new(n, &females, mixed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn females(&self) -> &[usize] {
        &self.females
    }

    pub fn males(&self) -> Vec<usize> {
        complement(self.n, &self.females)
    }

    pub fn mixed(&self) -> &BTreeMap<(usize, usize), Vec<f64>> {
        &self.mixed
    }
}

pub fn build_f_qso(spec: &FQsoSpec) -> Result<CubicMatrix> {
    f_qso_raw(spec.n, &spec.females, &spec.mixed)?.try_into()
}

/// Expands a partition and mixed table without checking the distributions,
/// so that bad rows surface as stochasticity violations. Missing mixed pairs
/// stay zero.
pub(crate) fn f_qso_raw(
    n: usize,
    females: &[usize],
    mixed: &BTreeMap<(usize, usize), Vec<f64>>,
) -> Result<RawCubic> {
    let females = check_partition(n, females)?;
    let mut is_female = vec![false; n];
    for &f in &females {
        is_female[f] = true;
    }
    let mut p = RawCubic::zeros(n)?;
    for i in 0..n {
        for j in 0..n {
            if i == 0 || j == 0 || is_female[i] == is_female[j] {
                p.set(i, j, 0, 1.0);
            }
        }
    }
    for (&(f, m), dist) in mixed {
        if f >= n || m >= n || f == 0 || m == 0 || !is_female[f] || is_female[m] {
            return Err(QsoError::InvalidSpec(format!(
                "mixed key ({f}, {m}) is not a (female, male) pair"
            )));
        }
        if dist.len() != n {
            return Err(QsoError::InvalidSpec(format!(
                "pair ({f}, {m}): distribution has {} entries, expected {n}",
                dist.len()
            )));
        }
        for (k, &v) in dist.iter().enumerate() {
            p.set_symmetric(f, m, k, v);
        }
    }
    Ok(p)
}

/// The two-type operator with `M = {1}`, `F = {2}` and mixed offspring
/// distribution `(a, b, c)` over states `(0, 1, 2)`.
pub fn build_v0_m2(a: f64, b: f64, c: f64) -> Result<CubicMatrix> {
    check_distribution(3, &[a, b, c]).map_err(QsoError::InvalidParameter)?;
    let spec = FQsoSpec::from_fn(3, &[2], |_, _| vec![a, b, c])?;
    build_f_qso(&spec)
}

/// Offspring distributions of the single male (state 1) with each female
/// `i` in `2..=m`: `row(i)[k]` is the probability of child `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct V1Coefficients {
    m: usize,
    rows: Vec<Vec<f64>>,
}

impl V1Coefficients {
    /// `rows[i - 2]` is the distribution for female `i`, of length `m + 1`.
    pub fn new(m: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if m < 2 {
            return Err(QsoError::InvalidParameter(format!(
                "m = {m}, need at least 2"
            )));
        }
        if rows.len() != m - 1 {
            return Err(QsoError::InvalidParameter(format!(
                "expected {} coefficient rows for m = {m}, found {}",
                m - 1,
                rows.len()
            )));
        }
        for (offset, row) in rows.iter().enumerate() {
            check_distribution(m + 1, row).map_err(|e| {
                QsoError::InvalidParameter(format!("row for female {}: {e}", offset + 2))
            })?;
        }
        Ok(Self { m, rows })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        let w = 1.0 / (m + 1) as f64;
        Self::new(m, vec![vec![w; m + 1]; m.saturating_sub(1)])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, female: usize) -> &[f64] {
        &self.rows[female - 2]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// The F-QSO with `M = {1}` and `F = {2, .., m}` on states `0..=m`.
pub fn build_v1(coeffs: &V1Coefficients) -> Result<CubicMatrix> {
    let m = coeffs.m;
    let females: Vec<usize> = (2..=m).collect();
    let spec = FQsoSpec::from_fn(m + 1, &females, |f, _| coeffs.row(f).to_vec())?;
    build_f_qso(&spec)
}

pub(crate) fn complement(n: usize, females: &[usize]) -> Vec<usize> {
    (1..n).filter(|s| !females.contains(s)).collect()
}

fn check_partition(n: usize, females: &[usize]) -> Result<Vec<usize>> {
    if n < 3 {
        return Err(QsoError::InvalidSpec(format!(
            "n = {n} leaves no room for nonempty female and male classes"
        )));
    }
    let mut f = females.to_vec();
    f.sort_unstable();
    f.dedup();
    if f.len() != females.len() {
        return Err(QsoError::InvalidSpec("female set has duplicates".into()));
    }
    if let Some(bad) = f.iter().find(|&&s| s == 0 || s >= n) {
        return Err(QsoError::InvalidSpec(format!(
            "state {bad} is outside 1..{}",
            n - 1
        )));
    }
    if f.is_empty() || f.len() == n - 1 {
        return Err(QsoError::InvalidSpec(
            "female set must be nonempty and proper".into(),
        ));
    }
    Ok(f)
}

fn check_distribution(n: usize, dist: &[f64]) -> std::result::Result<(), String> {
    if dist.len() != n {
        return Err(format!(
            "distribution has {} entries, expected {n}",
            dist.len()
        ));
    }
    if let Some(v) = dist.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(format!("entry {v} is negative or not finite"));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > TOL_SUM {
        return Err(format!("entries sum to {sum}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::simplex::SimplexPoint;

    #[test]
    fn two_type_matrix_layout() {
        let (a, b, c) = (0.2, 0.3, 0.5);
        let p = build_v0_m2(a, b, c).unwrap();
        for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (2, 2)] {
            assert_eq!(p.get(i, j, 0), 1.0);
            assert_eq!(p.get(i, j, 1), 0.0);
            assert_eq!(p.get(i, j, 2), 0.0);
        }
        assert_eq!((p.get(1, 2, 0), p.get(1, 2, 1), p.get(1, 2, 2)), (a, b, c));
        assert_eq!((p.get(2, 1, 0), p.get(2, 1, 1), p.get(2, 1, 2)), (a, b, c));
    }

    #[test]
    fn two_type_apply_examples() {
        let x = SimplexPoint::new(vec![0.0, 0.5, 0.5]).unwrap();
        let y = build_v0_m2(0.0, 0.5, 0.5).unwrap().apply(&x).unwrap();
        assert_eq!(y.coords(), &[0.5, 0.25, 0.25]);

        let third = 1.0 / 3.0;
        let y = build_v0_m2(third, third, third).unwrap().apply(&x).unwrap();
        let expect = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
        for (got, want) in y.coords().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }

        let p = build_v0_m2(1.0, 0.0, 0.0).unwrap();
        for x in [[0.2, 0.3, 0.5], [0.0, 0.5, 0.5], [0.0, 1.0, 0.0]] {
            let y = p.apply(&SimplexPoint::new(x.to_vec()).unwrap()).unwrap();
            assert_eq!(y.coords(), &[1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn two_type_rejects_non_distribution() {
        assert!(build_v0_m2(0.5, 0.5, 0.5).is_err());
        assert!(build_v0_m2(-0.1, 0.6, 0.5).is_err());
    }

    #[test]
    fn v1_uniform_example() {
        let p = build_v1(&V1Coefficients::uniform(3).unwrap()).unwrap();
        let x = SimplexPoint::new(vec![0.0, 0.5, 0.25, 0.25]).unwrap();
        let y = p.apply(&x).unwrap();
        assert_eq!(y.coords(), &[5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0]);
    }

    #[test]
    fn v1_with_m2_equals_two_type_builder() {
        let coeffs = V1Coefficients::new(2, vec![vec![0.1, 0.6, 0.3]]).unwrap();
        assert_eq!(
            build_v1(&coeffs).unwrap(),
            build_v0_m2(0.1, 0.6, 0.3).unwrap()
        );
    }

    #[test]
    fn v1_rejects_bad_coefficients() {
        assert!(V1Coefficients::new(1, vec![]).is_err());
        assert!(V1Coefficients::new(3, vec![vec![0.25; 4]]).is_err());
        assert!(V1Coefficients::new(2, vec![vec![0.5, 0.5, 0.5]]).is_err());
    }

    #[test]
    fn spec_rejects_improper_partitions() {
        let point_mass = |n: usize| {
            let mut d = vec![0.0; n];
            d[0] = 1.0;
            d
        };
        assert!(FQsoSpec::from_fn(2, &[1], |_, _| point_mass(2)).is_err());
        assert!(FQsoSpec::from_fn(4, &[], |_, _| point_mass(4)).is_err());
        assert!(FQsoSpec::from_fn(4, &[1, 2, 3], |_, _| point_mass(4)).is_err());
        assert!(FQsoSpec::from_fn(4, &[0, 2], |_, _| point_mass(4)).is_err());
        assert!(FQsoSpec::from_fn(4, &[2, 2], |_, _| point_mass(4)).is_err());
        assert!(FQsoSpec::from_fn(4, &[2, 3], |_, _| vec![0.5; 4]).is_err());
        assert!(FQsoSpec::new(4, &[2, 3], BTreeMap::new()).is_err());
    }

    #[test]
    fn spec_rejects_stray_keys() {
        let mut mixed = BTreeMap::new();
        mixed.insert((2, 1), vec![1.0, 0.0, 0.0]);
        mixed.insert((1, 2), vec![1.0, 0.0, 0.0]);
        assert!(FQsoSpec::new(3, &[2], mixed).is_err());
    }

    #[test]
    fn all_children_empty_gives_constant_operator() {
        let spec = FQsoSpec::from_fn(4, &[2, 3], |_, _| vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let p = build_f_qso(&spec).unwrap();
        // exhaustive evaluation on a grid of step 1/8
        let steps = 8;
        for a in 0..=steps {
            for b in 0..=(steps - a) {
                for c in 0..=(steps - a - b) {
                    let d = steps - a - b - c;
                    let x: Vec<f64> = [a, b, c, d]
                        .iter()
                        .map(|&v| v as f64 / steps as f64)
                        .collect();
                    let y = p.apply(&SimplexPoint::new(x).unwrap()).unwrap();
                    assert_eq!(y.coords(), &[1.0, 0.0, 0.0, 0.0]);
                }
            }
        }
    }

    #[test]
    fn built_operator_is_classified_with_its_partition() {
        let spec = FQsoSpec::from_fn(5, &[2, 4], |f, m| {
            let mut d = vec![0.1; 5];
            d[f] += 0.25;
            d[m] += 0.25;
            d
        })
        .unwrap();
        let p = build_f_qso(&spec).unwrap();
        let report = classify(&p);
        assert!(report.has_partition(5, spec.females()));
        assert!(!report.is_volterra);
    }
}
