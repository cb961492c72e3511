use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not Hermitian (max defect {0:e})")]
    NotHermitian(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("angle {name} = {value} lies outside [0, pi/2]")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error("correlation {0} lies outside [-1, 1]")]
    CorrelationOutOfRange(f64),
    #[error("setting vector is not unit length (norm {0})")]
    NonUnitVector(f64),
    #[error("ensemble weights sum to {0}, expected 1")]
    EnsembleTrace(f64),
    #[error("Bell functional needs at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("exhaustive WWZB scan supports at most 4 parties, got {0}")]
    TooManyParties(usize),
    #[error("violation {value} exceeds the quantum maximum {max} for {parties} parties")]
    ViolationAboveMaximum {
        value: f64,
        max: f64,
        parties: usize,
    },
    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
