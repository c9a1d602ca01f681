use thiserror::Error;

/// Errors for state validation, spectral calculus and measure evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("not Hermitian: asymmetry {residual:.3e} exceeds limit {limit:.3e}")]
    NonHermitian { residual: f64, limit: f64 },

    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{limit:.3e}")]
    NotPsd { min_eigenvalue: f64, limit: f64 },

    #[error("trace is {trace} instead of 1 (tolerance {tolerance:.1e})")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("negative eigenvalue {min_eigenvalue:.3e} in matrix power (limit -{limit:.3e})")]
    NegativeEigenvalue { min_eigenvalue: f64, limit: f64 },

    #[error("operator has empty support")]
    EmptySupport,

    #[error("Schatten norm order p must be nonzero and finite, got {p}")]
    InvalidNormOrder { p: f64 },

    #[error("invalid parameters alpha={alpha}, z={z}: need alpha in (0,1) or (1,inf) and z > 0")]
    InvalidParams { alpha: f64, z: f64 },

    #[error("alpha={alpha} outside the closed-form domain (0,1) union (1,2]")]
    InvalidAlpha { alpha: f64 },

    #[error("Bloch vector norm is {norm}, expected 1 for a pure state")]
    NotPure { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Kraus operators not trace preserving: residual {residual:.3e}")]
    NotTracePreserving { residual: f64 },

    #[error("Kraus operator {index} has more than one nonzero entry in column {column}")]
    NotIncoherentKraus { index: usize, column: usize },

    #[error("dimension {dim} too large (max {max})")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid probability vector: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("invalid state file: {message}")]
    InvalidStateFile { message: String },

    #[error("numeric optimization did not converge")]
    NumericFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
