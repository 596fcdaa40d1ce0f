//! Construction of quadratic stochastic operators.

mod fqso;
mod presets;
mod volterra;

pub(crate) use fqso::f_qso_raw;
pub use fqso::{build_f_qso, build_v0_m2, build_v1, FQsoSpec, V1Coefficients};
pub use presets::{ganikhodzhaev_lambda, ganikhodzhaev_v0, ganikhodzhaev_v1, Preset, PRESET_NAMES};
pub use volterra::{skew_from_cubic, volterra_from_skew, SkewMatrix, VolterraOperator};
