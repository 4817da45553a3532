use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),

    #[error("degenerate cell {cell}: det J = {det:e}")]
    DegenerateCell { cell: usize, det: f64 },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    /// The LHS matrix could not be factored, so the role-swapped pencil
    /// `B x = gamma A x` is not available. This happens when `A` is singular,
    /// i.e. the pencil falls in the degenerate case or has infinite
    /// eigenvalues with a singular `A`.
    #[error("singular LHS matrix (pencil is degenerate or has singular A): {0}")]
    SingularLhs(String),

    #[error("eigensolver did not converge after {restarts} restarts (worst residual {worst_residual:e})")]
    NoConvergence { restarts: usize, worst_residual: f64 },

    #[error("dense path refused: dimension {dim} exceeds limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("dense linear algebra failure: {0}")]
    Dense(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
