//! Seeded random F-QSOs and simplex points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::Result;
use crate::operators::FQsoSpec;

/// A uniform point on the simplex with `n` coordinates.
///
/// Normalized standard exponentials; normalizing uniforms instead would
/// concentrate mass near the barycenter.
pub fn uniform_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            return draws.into_iter().map(|d| d / sum).collect();
        }
    }
}

/// Random F-QSO on `m + 1` states with the given female set.
///
/// Each mixed pair gets an independent uniform distribution over all
/// `m + 1` states, drawn in ascending `(female, male)` order from a
/// ChaCha8 stream seeded by `seed`.
pub fn sample_random_f_qso(m: usize, females: &[usize], seed: u64) -> Result<FQsoSpec> {
    sample_with(m, females, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub(crate) fn sample_with<R: Rng + ?Sized>(
    m: usize,
    females: &[usize],
    rng: &mut R,
) -> Result<FQsoSpec> {
    FQsoSpec::from_fn(m + 1, females, |_, _| uniform_simplex(m + 1, rng))
}
