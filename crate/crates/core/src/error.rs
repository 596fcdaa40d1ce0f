use thiserror::Error;

use crate::cubic::StochasticityReport;

pub type Result<T, E = QsoError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QsoError {
    /// Array extents disagree with the declared state count.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("heredity coefficients are not stochastic ({} violation(s))", .0.violations.len())]
    NotStochastic(Box<StochasticityReport>),

    #[error("invalid simplex point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: operator has {expected} states, point has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid operator specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not Volterra")]
    NotVolterra,

    #[error("operator does not match the required F-QSO shape: {0}")]
    Classification(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
