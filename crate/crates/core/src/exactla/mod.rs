//! Exact linear algebra over prime fields.

mod blocks;
mod field;
mod rank;
mod sparse;

pub use blocks::restrict_block;
pub use field::{choose_primes, is_prime, FieldCtx};
pub use rank::RankTracker;
pub use sparse::{unflatten, vectorize, SparseMat, SparseVec};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LaError {
    #[error("{0} is not an odd prime below 2^32")]
    NotPrime(u64),
    #[error("prime {p} divides {modulus}")]
    PrimeDividesOrder { p: u64, modulus: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} invalid for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
}
