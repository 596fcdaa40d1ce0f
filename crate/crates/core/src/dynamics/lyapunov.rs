//! The Lyapunov functional `phi(x) = x_1 (1 - x_0 - x_1)` and its bounds.
//!
//! For an F-QSO whose only male is state 1, `phi` is the product of the
//! male mass and the female mass. Along any trajectory it contracts at
//! least quadratically, `phi(V x) <= phi(x)^2`, and starts at most `1/4`,
//! so `phi(x^(n)) <= (1/4)^(2^n)`.

use serde::Serialize;

use crate::error::{QsoError, Result};
use crate::simplex::{SimplexPoint, TOL_SUM};

/// Below this value of `phi` a trajectory is treated as absorbed.
pub const PHI_FLOOR: f64 = 1e-300;

/// `x_1 * sum_{i >= 2} x_i`. Requires at least three states.
///
/// The female mass is summed directly rather than computed as
/// `1 - x_0 - x_1`, which cancels catastrophically once `x_0` is near 1.
pub fn phi(x: &SimplexPoint) -> Result<f64> {
    if x.dim() < 3 {
        return Err(QsoError::InvalidParameter(format!(
            "phi needs at least 3 states, point has {}",
            x.dim()
        )));
    }
    Ok(phi_of(x.coords()))
}

pub(crate) fn phi_of(coords: &[f64]) -> f64 {
    coords[1] * coords[2..].iter().sum::<f64>()
}

/// `phi` after `n` steps of the two-type operator with mixed offspring
/// probabilities `b` (male) and `c` (female), starting from `phi0`.
///
/// One step maps `phi` to `4 b c phi^2`, so for `bc > 0` this returns
/// `(4bc)^-1 (4bc phi0)^(2^n)`; for `bc = 0` it returns 0 once `n >= 1`.
pub fn phi_closed_form(b: f64, c: f64, phi0: f64, n: u32) -> Result<f64> {
    if !(b >= 0.0 && c >= 0.0 && b + c <= 1.0 + TOL_SUM) {
        return Err(QsoError::InvalidParameter(format!(
            "b = {b}, c = {c} must be nonnegative with b + c <= 1"
        )));
    }
    if !(0.0..=0.25).contains(&phi0) {
        return Err(QsoError::InvalidParameter(format!(
            "phi0 = {phi0} is outside [0, 1/4]"
        )));
    }
    if n == 0 {
        return Ok(phi0);
    }
    let rate = 4.0 * b * c;
    if rate == 0.0 {
        return Ok(0.0);
    }
    let exponent = 2f64.powi(n.min(1100) as i32);
    Ok((rate * phi0).powf(exponent) / rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiBound {
    /// `(1/4)^(2^n)`, or 0 when that underflows.
    pub value: f64,
    /// `log2` of the bound, `-2^(n+1)`; always finite for `n < 1023`.
    pub log2: f64,
    /// False when `value` underflowed to 0.
    pub exact: bool,
}

pub fn phi_upper_bound(n: u32) -> PhiBound {
    let log2 = -2f64.powi(n.min(1100) as i32 + 1);
    // smallest positive subnormal is 2^-1074; powers of two above it are exact
    let exact = log2 >= -1074.0;
    let value = if exact { pow2(log2 as i32) } else { 0.0 };
    PhiBound { value, log2, exact }
}

/// `2^e` built from its bit pattern, exact down to the smallest subnormal.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1074..=1023).contains(&e));
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}
