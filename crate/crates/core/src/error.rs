use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {invariant} violated (magnitude {magnitude:e})")]
    InvalidDensity {
        invariant: &'static str,
        magnitude: f64,
    },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})"
    )]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("quantum Fisher information came out negative: {0:e}")]
    NegativeQfi(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("local and pair bounds are required when local dimensions differ")]
    MissingBounds,
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
