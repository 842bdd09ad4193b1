use crate::linalg::Ring;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("wrong degree: expected {expected}, found {found}")]
    Degree { expected: i32, found: String },
    #[error("d^2 != 0 at degree {degree}, entry ({row}, {col})")]
    DSquared { degree: i32, row: usize, col: usize },
    #[error("not a Maurer-Cartan element: {0}")]
    NotMc(String),
    #[error("operation requires a field, got {0}")]
    NotField(Ring),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("obstruction at stage {stage}: {detail}")]
    Obstruction { stage: usize, detail: String },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error indicates a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
