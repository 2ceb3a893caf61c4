use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("subspace must be nontrivial")]
    TrivialSubspace,

    #[error("datum subspace {index} is the whole space; dimensions must lie in 1..=n-1")]
    FullSubspace { index: usize },

    #[error("datum weight {index} is not positive")]
    NonPositiveWeight { index: usize },

    #[error("datum has {0} entries; enumeration is capped at 20")]
    TooManySubspaces(usize),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("vector does not lie in the subspace")]
    NotInSubspace,

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("polytope is empty")]
    Empty,

    #[error("polytope is not full-dimensional (affine hull has dimension {affine_dim} in R^{dim})")]
    NotFullDimensional { dim: usize, affine_dim: usize },

    #[error("origin is not an interior point")]
    OriginNotInterior,

    #[error("input exceeds size guard: {0}")]
    TooLarge(String),

    #[error("subspaces are not pairwise orthogonal")]
    NotOrthogonal,

    #[error("subspaces do not span the ambient space")]
    NotSpanning,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("invalid datum: {0}")]
    InvalidDatum(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
