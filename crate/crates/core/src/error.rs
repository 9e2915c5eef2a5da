use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u8, found: u8 },

    #[error("{op} is not defined for {degree}-forms")]
    UnsupportedDegree { op: &'static str, degree: u8 },

    #[error("index ({k}, {s}) lies outside the stored range")]
    OutOfRange { k: i64, s: i64 },

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("dense path limited to dimension {max}, got {dim}")]
    TooLarge { dim: usize, max: usize },

    #[error("non-finite sample in cell ({k}, {s})")]
    NonFinite { k: i64, s: i64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("report error: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::NotPositiveDefinite
                | Error::NonFinite { .. }
                | Error::Numerical(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
