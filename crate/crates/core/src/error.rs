use thiserror::Error;

use crate::qmat::QmatError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    Matrix(#[from] QmatError),
    #[error("not a density operator: {0}")]
    NotADensityOperator(String),
    #[error("outcome (j={j}, k={k}) is unreachable (p = {probability:e})")]
    UnreachableOutcome { j: usize, k: usize, probability: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
