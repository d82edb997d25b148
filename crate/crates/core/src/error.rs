use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("coweight {0} is not dominant")]
    NotDominant(String),

    #[error("invalid coweight: {0}")]
    InvalidCoweight(String),

    #[error("invalid root: {0}")]
    InvalidRoot(String),

    #[error("root-component conditions fail: {0}")]
    ConditionsViolated(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not invertible over Laurent polynomials (determinant {0} is not a monomial)")]
    NotLaurentInvertible(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected an upper unipotent matrix with monomial entries")]
    NonUnipotent,

    #[error("third point of the triple is not the base point")]
    NotBasePoint,

    #[error("excluded parameter value a = {0}")]
    ExcludedParameter(String),

    #[error("truncation order {given} is below the required order {required}")]
    TruncationTooSmall { given: usize, required: usize },

    #[error("truncation unstable: dimension {at_m} at M = {m} but {at_m1} at M + 1")]
    UnstableTruncation { m: usize, at_m: usize, at_m1: usize },

    #[error("precondition mismatch: {0}")]
    PreconditionMismatch(String),

    #[error("character computation exceeds the size limit ({0} weights)")]
    ScaleExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
