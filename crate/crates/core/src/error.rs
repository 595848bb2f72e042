use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system {family}{rank}")]
    InvalidRootSystem { family: char, rank: usize },

    #[error("cannot parse root system from {0:?}")]
    BadRootSystemName(String),

    #[error("parabolic index {k} out of range for rank {rank}")]
    BadParabolic { k: usize, rank: usize },

    #[error("weight {weight} has length {got}, expected {expected}")]
    RankMismatch { weight: String, got: usize, expected: usize },

    #[error("weight {0} is not dominant for the context")]
    NotDominant(String),

    #[error("context must omit exactly one simple root, omits {0}")]
    NotMaximalLevi(usize),

    #[error("power {k} out of range for rank {rank}")]
    PowerOutOfRange { k: usize, rank: String },

    #[error("bundle has a trivial summand; a general section vanishes nowhere")]
    EmptyLocus,

    #[error("bundle rank {rank} exceeds dim {dim}")]
    NegativeDimension { rank: String, dim: usize },

    #[error("multiplicity overflow")]
    Overflow,

    #[error("inconsistent exact-sequence bookkeeping: {0}")]
    Inconsistent(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
