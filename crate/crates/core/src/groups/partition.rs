//! Integer partitions.
//!
//! Partitions index both the conjugacy classes and the irreducible characters
//! of the symmetric group. The canonical ordering used throughout the crate is
//! ascending lexicographic order on the parts sequence, which puts `[1^n]`
//! first and `[n]` last.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A non-increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts that are already non-increasing.
    pub fn new(parts: Vec<u32>) -> Result<Self, GroupError> {
        if parts.contains(&0) {
            return Err(GroupError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(GroupError::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self, GroupError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// The one-part partition `[n]`.
    pub fn row(n: u32) -> Self {
        Self { parts: vec![n] }
    }

    /// The all-ones partition `[1^n]`.
    pub fn column(n: u32) -> Self {
        Self { parts: vec![1; n as usize] }
    }

    /// `[n-1, 1]`; requires `n >= 2`.
    pub fn hook_one(n: u32) -> Self {
        Self { parts: vec![n - 1, 1] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The conjugate (transposed) partition.
    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count() as u32)
            .collect();
        Self { parts }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = GroupError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Renders as `[3,2,1^2]`: repeated parts use exponent notation.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (idx, (part, mult)) in self.multiplicities().into_iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            if mult == 1 {
                write!(f, "{part}")?;
            } else {
                write!(f, "{part}^{mult}")?;
            }
        }
        f.write_str("]")
    }
}

/// Accepts `[3,2,1^2]`, `3,2,1,1` and `3 2 1 1`.
impl FromStr for Partition {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::InvalidPartition(format!("cannot parse partition `{s}`"));
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut parts = Vec::new();
        for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (token, 1),
            };
            let base: u32 = base.parse().map_err(|_| bad())?;
            parts.extend(std::iter::repeat_n(base, exp));
        }
        if parts.is_empty() {
            return Err(bad());
        }
        Partition::new(parts)
    }
}

/// All partitions of `n`, in ascending lexicographic order (`[1^n]` first,
/// `[n]` last).
pub fn partitions_of(n: u32) -> Result<Vec<Partition>, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyPartition);
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    generate(n, n, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn generate(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        generate(remaining - part, part, current, out);
        current.pop();
    }
}

/// `n!` as `u128`; exact for `n <= 34`.
pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Order of the centralizer of an element of cycle type `lambda`:
/// `prod_i i^{m_i} m_i!`.
pub fn centralizer_order(lambda: &Partition) -> u128 {
    lambda
        .multiplicities()
        .into_iter()
        .map(|(part, mult)| (part as u128).pow(mult) * factorial(mult))
        .product()
}

/// Number of permutations of cycle type `lambda`.
pub fn class_size(lambda: &Partition) -> u128 {
    factorial(lambda.n()) / centralizer_order(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partitions_of_three_in_order() {
        assert_eq!(partitions_of(3).unwrap(), vec![p(&[1, 1, 1]), p(&[2, 1]), p(&[3])]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions_of(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn zero_rejected() {
        assert!(matches!(partitions_of(0), Err(GroupError::EmptyPartition)));
    }

    #[test]
    fn s7_order_matches_table_layout() {
        let labels: Vec<String> = partitions_of(7).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(
            labels,
            [
                "[1^7]", "[2,1^5]", "[2^2,1^3]", "[2^3,1]", "[3,1^4]", "[3,2,1^2]", "[3,2^2]",
                "[3^2,1]", "[4,1^3]", "[4,2,1]", "[4,3]", "[5,1^2]", "[5,2]", "[6,1]", "[7]"
            ]
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for lambda in partitions_of(7).unwrap() {
            let s = lambda.to_string();
            assert_eq!(s.parse::<Partition>().unwrap(), lambda);
        }
        assert_eq!("6,1".parse::<Partition>().unwrap(), p(&[6, 1]));
        assert_eq!("2 2 1".parse::<Partition>().unwrap(), p(&[2, 2, 1]));
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("[]".parse::<Partition>().is_err());
    }

    #[test]
    fn invalid_parts_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::from_unsorted(vec![1, 3, 2]).unwrap(), p(&[3, 2, 1]));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&Partition::column(5)), 1);
        assert_eq!(class_size(&p(&[6, 1])), 840);
        assert_eq!(class_size(&p(&[2, 1])), 3);
        for n in 1..=8 {
            let total: u128 = partitions_of(n).unwrap().iter().map(class_size).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn conjugate_is_involution() {
        for lambda in partitions_of(7).unwrap() {
            assert_eq!(lambda.conjugate().conjugate(), lambda);
            assert_eq!(lambda.conjugate().n(), 7);
        }
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
    }
}
