//! Finite groups: partitions, permutations, multiplication tables and
//! conjugacy classes.

mod classes;
mod partition;
mod perm;
mod table;

pub use classes::{conjugacy_classes, inversion_closed, ConjugacyData};
pub use partition::{centralizer_order, class_size, factorial, partitions_of, Partition};
pub use perm::{cycle_type, Permutation};
pub use table::{build_group, build_group_with_limit, GroupDescriptor, GroupTable, DEFAULT_MAX_ORDER};

#[cfg(test)]
pub(crate) use table::fixtures;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("partitions of 0 are not supported")]
    EmptyPartition,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid group descriptor: {0}")]
    Descriptor(String),
    #[error("group of order {order} exceeds the table limit {max}")]
    TooLarge { order: u128, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: element 0 does not act as the identity")]
    MissingIdentity { line: usize },
    #[error("table is not associative: ({x}·{y})·{z} ≠ {x}·({y}·{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("{0}")]
    Io(String),
}

impl GroupError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Self::Parse { line, msg: msg.into() }
    }
}
