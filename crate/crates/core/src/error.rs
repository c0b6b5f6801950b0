use thiserror::Error;

/// Errors raised by the numerical kernel, the measures and the chain backends.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:e} exceeds tolerance")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("matrix is not antisymmetric: |A[{row}][{col}] + A[{col}][{row}]| = {deviation:e} exceeds tolerance")]
    NotAntisymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below clamp threshold")]
    NotPositiveSemidefinite { eigenvalue: f64 },
    #[error("Pfaffian needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid site selection: {0}")]
    InvalidSites(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("unknown state tag `{0}`")]
    UnknownTag(String),
    #[error("malformed Pauli labels: {0}")]
    MalformedLabels(String),
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),
    #[error("eigensolver failed to converge: {0}")]
    NoConvergence(String),
    #[error("backend inconsistency: reduced density matrix eigenvalue {eigenvalue:e} below -1e-7")]
    BackendInconsistency { eigenvalue: f64 },
    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
