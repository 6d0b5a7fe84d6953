use thiserror::Error;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("coset type needs an even degree, got {0}")]
    OddDegree(usize),
    #[error("partitions of different weights: {left} and {right}")]
    WeightMismatch { left: usize, right: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("the {family} Weingarten function has a pole at {dimension}")]
    Pole { family: String, dimension: String },
    #[error("{what} needs about {cost} elementary steps, over the budget of {budget}")]
    Budget { what: String, cost: u128, budget: u128 },
    #[error("checksum mismatch in {table}: {detail}")]
    Checksum { table: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("rational reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
