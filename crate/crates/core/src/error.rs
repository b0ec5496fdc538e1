use thiserror::Error;

/// Errors raised by the matrix kernels, norm families, channels and entropies.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("negative power of a matrix that is not strictly positive (min eigenvalue {min_eigenvalue:e}, floor {floor:e})")]
    SingularForNegativePower { min_eigenvalue: f64, floor: f64 },

    #[error("rank cutoff k = {k} outside [1, {max}]")]
    BadK { k: usize, max: usize },

    #[error("exponent p = {p} not admitted: {reason}")]
    BadP { p: f64, reason: &'static str },

    #[error("entry count {len} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{rows}x{cols} matrix cannot be an isometry (rows < cols)")]
    NotIsometryShape { rows: usize, cols: usize },

    #[error("Kraus operators are not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("not an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("argument {x} outside the domain of {what}")]
    DomainError { x: f64, what: &'static str },

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("instance kind {got} does not match case requirement {expected}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("unknown case id {0:?}")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
