#![allow(dead_code)]

use rand::Rng;

use qso::analysis::{sample_random_f_qso, uniform_simplex};
use qso::operators::{build_f_qso, build_v1, SkewMatrix, V1Coefficients};
use qso::{CubicMatrix, RawCubic, SimplexPoint};

pub fn random_point<R: Rng>(n: usize, rng: &mut R) -> SimplexPoint {
    SimplexPoint::new(uniform_simplex(n, rng)).unwrap()
}

/// Symmetric stochastic matrix; each pair gets a random distribution, with
/// some entries forced to zero so that boundary patterns appear.
pub fn random_cubic<R: Rng>(n: usize, rng: &mut R) -> CubicMatrix {
    let mut p = RawCubic::zeros(n).unwrap();
    for i in 0..n {
        for j in i..n {
            let mut d = uniform_simplex(n, rng);
            let keep = rng.random_range(0..n);
            for (k, v) in d.iter_mut().enumerate() {
                if k != keep && rng.random_bool(0.3) {
                    *v = 0.0;
                }
            }
            let sum: f64 = d.iter().sum();
            for (k, v) in d.iter().enumerate() {
                p.set_symmetric(i, j, k, v / sum);
            }
        }
    }
    p.try_into().unwrap()
}

pub fn random_skew<R: Rng>(m: usize, rng: &mut R) -> SkewMatrix {
    SkewMatrix::from_upper(m, |_, _| {
        // boundary values are legal and worth hitting
        match rng.random_range(0..8) {
            0 => 1.0,
            1 => -1.0,
            2 => 0.0,
            _ => rng.random_range(-1.0..=1.0),
        }
    })
    .unwrap()
}

pub fn random_v1<R: Rng>(m: usize, rng: &mut R) -> (CubicMatrix, V1Coefficients) {
    let rows = (2..=m).map(|_| uniform_simplex(m + 1, rng)).collect();
    let coeffs = V1Coefficients::new(m, rows).unwrap();
    (build_v1(&coeffs).unwrap(), coeffs)
}

/// Random F-QSO with a random female set on `m + 1` states.
pub fn random_f_qso<R: Rng>(m: usize, rng: &mut R) -> (CubicMatrix, Vec<usize>) {
    let mask = rng.random_range(1..(1u64 << m) - 1);
    let females: Vec<usize> = (0..m)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect();
    let spec = sample_random_f_qso(m, &females, rng.random()).unwrap();
    (build_f_qso(&spec).unwrap(), females)
}
