use thiserror::Error;

use crate::exact::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("linear system is inconsistent (witness row {row})")]
    Inconsistent { row: usize },

    #[error("linear system is rank deficient (rank {rank} < {cols} unknowns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("window {window} too small: {reason}")]
    WindowTooSmall { window: u32, reason: String },

    #[error("operators act on different spectra")]
    SpectrumMismatch,

    #[error("operator windows differ ({0} vs {1})")]
    WindowMismatch(u32, u32),

    #[error("radius {requested} exceeds exact radius {available}")]
    RadiusTooLarge { requested: u32, available: u32 },

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("index cap exceeded: {0}")]
    CapExceeded(String),

    #[error("Gamma pole too close at argument {argument} (key p={p}, q={q})")]
    GammaPole { argument: f64, p: HalfInt, q: HalfInt },

    #[error("nonzero residual in structure-constant fit: {0}")]
    NonzeroResidual(String),

    #[error("calibration obstruction at (alpha={alpha}, k={k}): {reason}")]
    Calibration { alpha: usize, k: usize, reason: String },

    #[error("invalid Frobenius potential: {0}")]
    InvalidPotential(String),

    #[error("topological solution did not close at degree {0}")]
    NoFixedPoint(u32),

    #[error("zero binomial denominator for tuple {0}")]
    ZeroDenominator(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
