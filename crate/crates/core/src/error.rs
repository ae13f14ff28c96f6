use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("not a valid channel (cp residual {cp_residual:e}, tp residual {tp_residual:e})")]
    InvalidChannel { cp_residual: f64, tp_residual: f64 },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("unknown outcome label {0:?}")]
    UnknownOutcome(String),

    #[error("evaluation routes disagree by {discrepancy:e}")]
    InconsistentEvaluation { discrepancy: f64 },

    #[error("objective is not diagonal (max off-diagonal {max_off_diagonal:e})")]
    NotDiagonal { max_off_diagonal: f64 },

    #[error("enumeration of {count} deterministic strategies exceeds cap {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("tolerance {0:e} outside [1e-12, 1e-2]")]
    InvalidTolerance(f64),

    #[error("invalid threshold query: {0}")]
    InvalidQuery(String),

    #[error("semidefinite program did not converge: {0}")]
    NotConverged(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid interactive measurement: {0}")]
    InvalidMeasurement(String),

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
