use alloc::string::String;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the guarded domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("dimension mismatch: {angles} angles but {masses} masses")]
    DimensionMismatch { angles: usize, masses: usize },

    #[error("invalid angle configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid mass vector: {0}")]
    InvalidMasses(String),

    #[error("collision: arc from satellite {from} to satellite {to} is {arc}")]
    Collision { from: usize, to: usize, arc: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ratio {ratio} has no kite configuration (critical ratio {critical})")]
    NoKite { ratio: f64, critical: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoBracket { .. } | Error::NonConvergence { .. })
    }
}
