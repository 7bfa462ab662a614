use serde::{Deserialize, Serialize};

use super::{GroupError, Partition};

/// A bijection on `{0, .., n-1}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self, GroupError> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(GroupError::InvalidPermutation(format!("{n} points is too many")));
        }
        let mut seen = vec![false; n];
        for &img in &images {
            let img = img as usize;
            if img >= n || seen[img] {
                return Err(GroupError::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[img] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n as u8).collect() }
    }

    /// Builds a permutation from disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Self, GroupError> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        for cycle in cycles {
            for (idx, &point) in cycle.iter().enumerate() {
                let next = cycle[(idx + 1) % cycle.len()];
                if point as usize >= n {
                    return Err(GroupError::InvalidPermutation(format!("point {point} out of range")));
                }
                images[point as usize] = next;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        Self { images }
    }

    /// Lexicographic rank of the image list among all permutations of the
    /// same degree. The identity has rank 0.
    pub fn rank(&self) -> usize {
        let n = self.images.len();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller = self.images[i + 1..].iter().filter(|&&v| v < self.images[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Self {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u8> = (0..n as u8).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Self { images }
    }
}

/// Cycle lengths of `p` sorted non-increasingly, fixed points included.
pub fn cycle_type(p: &Permutation) -> Partition {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = p.apply(cur);
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths).expect("cycle lengths are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_types() {
        assert_eq!(cycle_type(&Permutation::identity(7)), Partition::column(7));
        let p = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(cycle_type(&p), Partition::new(vec![3, 2]).unwrap());
        let seven = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        assert_eq!(cycle_type(&seven), Partition::row(7));
    }

    #[test]
    fn identity_has_rank_zero() {
        assert_eq!(Permutation::identity(6).rank(), 0);
        assert_eq!(Permutation::unrank(6, 0), Permutation::identity(6));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(rank in 0usize..5040) {
            let p = Permutation::unrank(7, rank);
            prop_assert_eq!(p.rank(), rank);
        }

        #[test]
        fn compose_with_inverse_is_identity(rank in 0usize..720) {
            let p = Permutation::unrank(6, rank);
            prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(6));
            prop_assert_eq!(cycle_type(&p), cycle_type(&p.inverse()));
        }
    }
}
