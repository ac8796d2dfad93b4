use thiserror::Error;

/// Errors raised by the numerical kernel and the physics layers above it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dagger| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: &'static str, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("expectation value of a Hermitian operator has imaginary part {imag:e}")]
    NonRealExpectation { imag: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidState { reason: &'static str },

    #[error("invalid model parameter `{field}`: {reason}")]
    InvalidParams {
        field: &'static str,
        reason: &'static str,
    },

    #[error("time series needs at least 3 samples, got {len}")]
    GridTooSmall { len: usize },

    #[error("time grid is not uniform or not strictly increasing near index {index}")]
    NonUniformGrid { index: usize },

    #[error("{what}: two evaluation routes disagree by {deviation:e}")]
    RouteMismatch { what: &'static str, deviation: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
