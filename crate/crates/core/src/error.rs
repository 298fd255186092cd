use thiserror::Error;

/// Errors raised by the numerical and combinatorial routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precoder pair is not aligned at the eavesdropper: {0}")]
    NotAligned(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("target ({d1}, {d2}) lies outside the achievable region")]
    TargetInfeasible { d1: usize, d2: usize },

    #[error("construction deficit: {0}")]
    ConstructionDeficit(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("degenerate channel draw after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
