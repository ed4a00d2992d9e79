use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H†| = {deviation:e} at ({row}, {col})")]
    NotHermitian { deviation: f64, row: usize, col: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("basis is not unitary: max |U†U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized: |ψ|² = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("empty operand: dimension must be positive")]
    Empty,

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative probability {value} at outcome {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    NotNormalizedDistribution { sum: f64 },

    #[error("invalid spin: 2j must be a positive integer, got j = {0}")]
    InvalidSpin(f64),

    #[error("degenerate qubit configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("no information: {0}")]
    NoInformation(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}
