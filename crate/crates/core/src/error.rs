use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no events given")]
    EmptyInput,
    #[error("event {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("operation requires dimension {expected}, sequence has {found}")]
    UnsupportedDimension { expected: usize, found: usize },
    #[error("invalid interval: t1 = {t1} > t2 = {t2}")]
    InvalidInterval { t1: i64, t2: i64 },
    #[error("window [{i}, {j}] is invalid for a sequence of {n} events")]
    InvalidWindow { i: usize, j: usize, n: usize },
    #[error("coordinate {value} lies outside the quantizer domain")]
    OutOfBounds { value: f64 },
    #[error("shift id {0} out of range")]
    InvalidShift(usize),
    #[error("event {0} has no color")]
    MissingColor(usize),
    #[error("direction vector must be nonzero")]
    InvalidDirection,
    #[error("point {0} is not a vertex of the window hull")]
    NotOnHull(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window is empty")]
    EmptyWindow,
    #[error("input is not sorted in Z-order at position {0}")]
    OrderingViolated(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
