use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotPd(f64),

    #[error("matrix is not a projection: {0}")]
    NotProjection(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("alpha = 1 is excluded; no Kullback-Leibler limit is taken")]
    AlphaOne,

    #[error("invalid alpha {0}: must be positive and finite")]
    InvalidAlpha(f64),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("unsupported function `{name}`: {reason}")]
    UnsupportedFunction { name: String, reason: String },

    #[error("0 * infinity is undefined")]
    ZeroTimesInfinity,

    #[error("+inf + -inf is undefined")]
    InfiniteCancellation,

    #[error("limit did not converge within {steps} steps (last values {trace:?})")]
    Convergence { steps: usize, trace: Vec<f64> },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
