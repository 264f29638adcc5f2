use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not square: expected {rank}x{rank}, row {row} has {len} entries")]
    Shape { rank: usize, row: usize, len: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    /// `minor` is the 1-based size of the first leading principal minor that is not positive.
    #[error("matrix is not positive definite: leading principal minor of size {minor} is {value}")]
    NotPositiveDefinite { minor: usize, value: String },

    #[error("unknown lattice name `{0}`")]
    UnknownName(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("sublattice basis is linearly dependent")]
    SingularSublattice,

    #[error("lattice is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("member {index} of the criterion set is not represented by the target form")]
    MemberNotInS { index: usize },

    #[error("no bound up to {bound} generates the lattice")]
    NotGenerated { bound: i64 },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("form set members {0} and {1} are isometric")]
    DuplicateMember(usize, usize),

    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("invalid partition family: {0}")]
    InvalidFamily(String),

    #[error("value out of range: {0}")]
    Overflow(String),
}

pub type Result<T, E = LatticeError> = std::result::Result<T, E>;
