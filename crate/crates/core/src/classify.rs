//! Operator-class detection by exact coefficient pattern.
//!
//! Three patterns are recognized:
//!
//! * Volterra: `p[i][j][k] = 0` whenever `k` is not a parent (`k ∉ {i, j}`).
//! * strictly non-Volterra: `p[i][j][k] = 0` whenever `k` is a parent.
//! * F-QSO: with state 0 as the empty body and `{1, .., n-1}` split into
//!   females `F` and males `M`, every same-class pair (state 0 joins both
//!   classes) produces state 0 with probability exactly 1. Mixed pairs are
//!   free.
//!
//! The F-QSO pattern is invariant under swapping `F` and `M`, so each
//! partition is reported once, by the class that does not contain state 1.

use serde::Serialize;

use crate::cubic::CubicMatrix;

/// Largest `|E| = n - 1` for which F-QSO partitions are searched.
pub const MAX_F_SEARCH_STATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Volterra,
    StrictlyNonVolterra,
    /// A pair that involves state 0 or repeats a parent is not absorbed into 0.
    FQsoSameClassPair,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub condition: Condition,
    pub value: f64,
}

impl std::fmt::Display for ClassWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.condition {
            Condition::Volterra => "breaks the Volterra condition",
            Condition::StrictlyNonVolterra => "breaks the strictly non-Volterra condition",
            Condition::FQsoSameClassPair => "breaks the F-QSO same-class pattern",
        };
        write!(
            f,
            "p[{}][{}][{}] = {} {what}",
            self.i, self.j, self.k, self.value
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FSearch {
    Exhaustive,
    /// `n - 1` exceeds [`MAX_F_SEARCH_STATES`]; no partitions were tested.
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub is_volterra: bool,
    pub is_strictly_non_volterra: bool,
    /// Canonical female sets (state 1 is always male), sorted ascending.
    pub f_qso_sets: Vec<Vec<usize>>,
    pub f_search: FSearch,
    pub violations: Vec<ClassWitness>,
}

impl ClassReport {
    pub fn is_f_qso(&self) -> bool {
        !self.f_qso_sets.is_empty()
    }

    /// True when `females` or its complement in `{1, .., n-1}` was found.
    pub fn has_partition(&self, n: usize, females: &[usize]) -> bool {
        let canonical = canonical_females(n, females);
        self.f_qso_sets.contains(&canonical)
    }
}

/// Returns whichever of `females` and its complement excludes state 1.
pub fn canonical_females(n: usize, females: &[usize]) -> Vec<usize> {
    let mut f: Vec<usize> = females.to_vec();
    f.sort_unstable();
    f.dedup();
    if f.contains(&1) {
        (1..n).filter(|s| !f.contains(s)).collect()
    } else {
        f
    }
}

pub fn classify(p: &CubicMatrix) -> ClassReport {
    let n = p.n();
    let mut violations = Vec::new();

    let volterra = first_witness(p, Condition::Volterra, |i, j, k| k != i && k != j);
    let strictly = first_witness(p, Condition::StrictlyNonVolterra, |i, j, k| {
        k == i || k == j
    });
    violations.extend(volterra.iter().cloned());
    violations.extend(strictly.iter().cloned());

    let (f_qso_sets, f_search) = if n - 1 > MAX_F_SEARCH_STATES {
        (Vec::new(), FSearch::TooLarge)
    } else {
        match base_pattern_witness(p) {
            Some(w) => {
                violations.push(w);
                (Vec::new(), FSearch::Exhaustive)
            }
            None => (search_partitions(p), FSearch::Exhaustive),
        }
    };

    ClassReport {
        is_volterra: volterra.is_none(),
        is_strictly_non_volterra: strictly.is_none(),
        f_qso_sets,
        f_search,
        violations,
    }
}

/// The Volterra condition alone, without the partition search.
pub fn is_volterra(p: &CubicMatrix) -> bool {
    first_witness(p, Condition::Volterra, |i, j, k| k != i && k != j).is_none()
}

/// Checks the F-QSO pattern for one given female set (any orientation).
///
/// Returns false when `females` is empty, not proper, or out of range.
pub fn matches_f_qso(p: &CubicMatrix, females: &[usize]) -> bool {
    let n = p.n();
    let mut is_female = vec![false; n];
    for &f in females {
        if f == 0 || f >= n {
            return false;
        }
        is_female[f] = true;
    }
    let count = is_female.iter().filter(|b| **b).count();
    if count == 0 || count == n - 1 {
        return false;
    }
    for i in 0..n {
        for j in i..n {
            let same_class = i == 0 || j == 0 || is_female[i] == is_female[j];
            if same_class && !absorbed(p, i, j) {
                return false;
            }
        }
    }
    true
}

fn absorbed(p: &CubicMatrix, i: usize, j: usize) -> bool {
    p.get(i, j, 0) == 1.0 && (1..p.n()).all(|k| p.get(i, j, k) == 0.0)
}

fn first_witness(
    p: &CubicMatrix,
    condition: Condition,
    must_vanish: impl Fn(usize, usize, usize) -> bool,
) -> Option<ClassWitness> {
    let n = p.n();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let value = p.get(i, j, k);
                if must_vanish(i, j, k) && value != 0.0 {
                    return Some(ClassWitness {
                        i,
                        j,
                        k,
                        condition,
                        value,
                    });
                }
            }
        }
    }
    None
}

/// Pairs `(0, j)` and `(i, i)` are same-class under every partition.
fn base_pattern_witness(p: &CubicMatrix) -> Option<ClassWitness> {
    let n = p.n();
    let forced = (0..n).map(|j| (0, j)).chain((1..n).map(|i| (i, i)));
    for (i, j) in forced {
        if !absorbed(p, i, j) {
            let k = (0..n)
                .find(|&k| p.get(i, j, k) != if k == 0 { 1.0 } else { 0.0 })
                .unwrap_or(0);
            return Some(ClassWitness {
                i,
                j,
                k,
                condition: Condition::FQsoSameClassPair,
                value: p.get(i, j, k),
            });
        }
    }
    None
}

fn search_partitions(p: &CubicMatrix) -> Vec<Vec<usize>> {
    let n = p.n();
    if n < 3 {
        return Vec::new();
    }
    // absorbed[i][j] for 1 <= i < j
    let absorbed_pair: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i < j && i >= 1 && absorbed(p, i, j))
                .collect()
        })
        .collect();

    // State 1 is male; bit b of the mask marks state b + 2 as female.
    let free = n - 2;
    let mut found = Vec::new();
    for mask in 1u32..(1u32 << free) {
        let female = |s: usize| s >= 2 && mask & (1 << (s - 2)) != 0;
        let ok =
            (1..n).all(|i| ((i + 1)..n).all(|j| female(i) != female(j) || absorbed_pair[i][j]));
        if ok {
            found.push((2..n).filter(|&s| female(s)).collect());
        }
    }
    found.sort();
    found
}
