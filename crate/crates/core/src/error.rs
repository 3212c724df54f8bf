use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Schatten exponent p = {0} is outside [1, inf]")]
    InvalidExponent(f64),

    #[error("the zero matrix has no balanced S_2p factorization")]
    ZeroMatrix,

    #[error("operator norm {norm} exceeds 1 + {tol:e}")]
    NotContraction { norm: f64, tol: f64 },

    #[error("commutation defect {defect:e} exceeds tolerance {tol:e}")]
    NotCommuting { defect: f64, tol: f64 },

    #[error("family lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("polynomial family vanishes on the torus and cannot be normalized")]
    DegenerateFamily,

    #[error("omega_* diverges: {0}")]
    Divergent(String),

    #[error("invalid modulus of continuity: {0}")]
    InvalidModulus(String),

    #[error("invalid bump function: {0}")]
    InvalidBump(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical postcondition failed: {0}")]
    Postcondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
