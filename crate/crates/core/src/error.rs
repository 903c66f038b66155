use thiserror::Error;

/// Errors raised by matrix primitives, state validation and the criteria.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |h - h†| entry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("vector norm is {norm}, expected 1")]
    BadNorm { norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported dimensions {da}x{db}: {reason}")]
    UnsupportedDims { da: usize, db: usize, reason: &'static str },

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("mixture weights must be positive and sum to 1: {0}")]
    BadWeights(String),

    #[error("observable is not dichotomic (eigenvalues {0:?})")]
    NotDichotomic([f64; 2]),

    #[error("observable lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("no verdict crossing on [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("unknown criterion '{0}'")]
    UnknownCriterion(String),

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("criterion '{criterion}' does not apply: {reason}")]
    NotApplicable { criterion: &'static str, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
