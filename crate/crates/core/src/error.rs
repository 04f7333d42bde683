use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("index ({row}, {col}) out of range for size {size}")]
    Index { row: usize, col: usize, size: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("expected rank {expected}, got {got}")]
    Rank { expected: usize, got: usize },
    #[error("singular system at pivot {index}")]
    Singular { index: usize },
    #[error("dense size {n} exceeds cap {cap}")]
    DenseCap { n: usize, cap: usize },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
