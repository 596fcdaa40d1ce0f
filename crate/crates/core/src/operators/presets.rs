//! Named operators.
//!
//! The two classical operators on the 2-simplex (three states, written here
//! with 0-based indices `x0, x1, x2`):
//!
//! ```text
//! V0: (x0^2 + 2 x0 x1,  x1^2 + 2 x1 x2,  x2^2 + 2 x0 x2)   Volterra
//! V1: (x0^2 + 2 x1 x2,  x1^2 + 2 x0 x2,  x2^2 + 2 x0 x1)   non-Volterra
//! ```
//!
//! and their convex blend `V_lambda = (1 - lambda) V0 + lambda V1`. The
//! F-QSO families are exposed as presets too, together with the constant
//! map on two states that every F-QSO with a single non-empty state reduces to.

use serde::{Deserialize, Serialize};

use crate::cubic::{CubicMatrix, RawCubic};
use crate::error::{QsoError, Result};
use crate::operators::fqso::{build_v0_m2, build_v1, V1Coefficients};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Preset {
    GanikhodzhaevV0,
    GanikhodzhaevV1,
    GanikhodzhaevLambda {
        lambda: f64,
    },
    #[serde(rename = "fqso_v0_m2")]
    FQsoV0M2 {
        a: f64,
        b: f64,
        c: f64,
    },
    #[serde(rename = "fqso_v1")]
    FQsoV1 {
        coefficients: Vec<Vec<f64>>,
    },
    /// Two states; every pair yields state 0.
    ConstantM1,
}

/// `(name, description)` for every preset.
pub const PRESET_NAMES: &[(&str, &str)] = &[
    (
        "ganikhodzhaev_v0",
        "Volterra operator on 3 states, rock-paper-scissors skew",
    ),
    (
        "ganikhodzhaev_v1",
        "non-Volterra companion of V0 on 3 states",
    ),
    (
        "ganikhodzhaev_lambda",
        "(1 - lambda) V0 + lambda V1, param: lambda in [0, 1]",
    ),
    (
        "fqso_v0_m2",
        "two-type F-QSO, M = {1}, F = {2}, params: a b c (sum 1)",
    ),
    (
        "fqso_v1",
        "F-QSO with M = {1}, F = {2..m}, params: m, then (m - 1) rows of m + 1 values",
    ),
    ("constant_m1", "constant F-QSO on 2 states, V(x) = (1, 0)"),
];

impl Preset {
    /// Parses a preset name with flat numeric parameters, as given on the
    /// command line.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let expect = |count: usize| -> Result<()> {
            if params.len() == count {
                Ok(())
            } else {
                Err(QsoError::InvalidParameter(format!(
                    "preset `{name}` takes {count} parameter(s), {} given",
                    params.len()
                )))
            }
        };
        match name {
            "ganikhodzhaev_v0" => expect(0).map(|_| Preset::GanikhodzhaevV0),
            "ganikhodzhaev_v1" => expect(0).map(|_| Preset::GanikhodzhaevV1),
            "ganikhodzhaev_lambda" => {
                expect(1)?;
                Ok(Preset::GanikhodzhaevLambda { lambda: params[0] })
            }
            "fqso_v0_m2" => {
                expect(3)?;
                Ok(Preset::FQsoV0M2 {
                    a: params[0],
                    b: params[1],
                    c: params[2],
                })
            }
            "fqso_v1" => {
                let m = params.first().copied().unwrap_or(0.0);
                if m.fract() != 0.0 || m < 2.0 {
                    return Err(QsoError::InvalidParameter(
                        "fqso_v1 needs an integer m >= 2 as first parameter".into(),
                    ));
                }
                let m = m as usize;
                expect(1 + (m - 1) * (m + 1))?;
                let coefficients = params[1..].chunks(m + 1).map(<[f64]>::to_vec).collect();
                Ok(Preset::FQsoV1 { coefficients })
            }
            "constant_m1" => expect(0).map(|_| Preset::ConstantM1),
            other => Err(QsoError::UnknownPreset(other.to_string())),
        }
    }

    pub fn matrix(&self) -> Result<CubicMatrix> {
        match self {
            Preset::GanikhodzhaevV0 => Ok(ganikhodzhaev_v0()),
            Preset::GanikhodzhaevV1 => Ok(ganikhodzhaev_v1()),
            Preset::GanikhodzhaevLambda { lambda } => ganikhodzhaev_lambda(*lambda),
            Preset::FQsoV0M2 { a, b, c } => build_v0_m2(*a, *b, *c),
            Preset::FQsoV1 { coefficients } => {
                let m = coefficients.len() + 1;
                build_v1(&V1Coefficients::new(m, coefficients.clone())?)
            }
            Preset::ConstantM1 => {
                let mut p = RawCubic::zeros(2)?;
                for i in 0..2 {
                    for j in 0..2 {
                        p.set(i, j, 0, 1.0);
                    }
                }
                p.try_into()
            }
        }
    }
}

/// Builds a 3-state operator where `p[i][i][i] = 1` and each off-diagonal
/// pair sends its whole offspring to `child(i, j)`.
fn three_state(child: impl Fn(usize, usize) -> usize) -> CubicMatrix {
    let mut p = RawCubic::zeros(3).expect("n = 3 is structurally valid");
    for i in 0..3 {
        p.set(i, i, i, 1.0);
        for j in (i + 1)..3 {
            p.set_symmetric(i, j, child(i, j), 1.0);
        }
    }
    p.try_into().expect("preset is stochastic")
}

pub fn ganikhodzhaev_v0() -> CubicMatrix {
    // pairs (0,1) -> 0, (1,2) -> 1, (0,2) -> 2
    three_state(|i, j| match (i, j) {
        (0, 1) => 0,
        (1, 2) => 1,
        _ => 2,
    })
}

pub fn ganikhodzhaev_v1() -> CubicMatrix {
    // each pair produces the third state
    three_state(|i, j| 3 - i - j)
}

pub fn ganikhodzhaev_lambda(lambda: f64) -> Result<CubicMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(QsoError::InvalidParameter(format!(
            "lambda = {lambda} is outside [0, 1]"
        )));
    }
    let v0 = ganikhodzhaev_v0();
    let v1 = ganikhodzhaev_v1();
    let entries = v0
        .raw()
        .entries()
        .iter()
        .zip(v1.raw().entries())
        .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
        .collect();
    CubicMatrix::from_flat(3, entries)
}
