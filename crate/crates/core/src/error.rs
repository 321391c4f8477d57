use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: symmetry defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial degree {degree} exceeds operator truncation degree {max_deg}")]
    DegreeOverflow { degree: u32, max_deg: u32 },

    #[error("sequence order {order} is insufficient: {required} required")]
    InsufficientOrder { order: u32, required: u32 },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("sampling grid contains no point of the region")]
    EmptyGrid,

    #[error("point {0:?} lies outside the region")]
    PointOutsideRegion(Vec<f64>),

    #[error("weight of atom {0} is not positive semidefinite")]
    NonPsdWeight(usize),

    #[error("Choi matrix of atom {0} is not positive semidefinite")]
    NonPsdChoi(usize),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
