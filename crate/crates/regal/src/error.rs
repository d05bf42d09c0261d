use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shift position {position} out of range for degree {degree}")]
    PositionOutOfRange { position: usize, degree: usize },
    #[error("homogeneity degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("top-degree space is not one-dimensional (dim {0})")]
    NotOneDimensionalTop(usize),
    #[error("no exact Q matrix: the cyclic-symmetry system is inconsistent")]
    NoExactQ,
    #[error("slice space is singular: Q is underdetermined")]
    SingularSliceSpace,
    #[error("total kappa coefficient is zero; quasi-determinant undefined")]
    SingularKappa,
    #[error("algebra is not generic (some kappa coefficient vanishes)")]
    NonGeneric,
    #[error("Q matrix is not diagonal")]
    NotDiagonalQ,
    #[error("division by zero while forming {0}")]
    DivisionByZero(String),
    #[error("unknown catalog key {0:?}")]
    UnknownKey(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("input format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
