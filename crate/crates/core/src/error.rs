use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("method requires a real symmetric matrix")]
    NotRealSymmetric,

    #[error("method requires real input vectors")]
    NotReal,

    #[error("initial vector is zero")]
    ZeroVector,

    #[error("shift set is empty")]
    EmptyShifts,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("singular matrix: zero pivot at row {row}")]
    Singular { row: usize },

    #[error("shift coincides with eigenvalue {eigenvalue}")]
    ShiftOnEigenvalue { eigenvalue: f64 },

    #[error("dense oracle limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
