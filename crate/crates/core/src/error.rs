use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("characteristic polynomial does not split into supported factors over the field")]
    NotSplitOverField,
    #[error("matrix is not periodic")]
    NotPeriodic,
    #[error("rank {rank} is below half of the size {n}")]
    RankTooLow { rank: usize, n: usize },
    #[error("search budget exhausted: {0}")]
    SolverExhausted(String),
    #[error("matrix is derogatory")]
    Derogatory,
    #[error("target trace does not match the matrix trace")]
    TraceMismatch,
    #[error("matrix is not torsion")]
    NotTorsion,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
