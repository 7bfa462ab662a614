use std::collections::BTreeMap;

use super::{FieldCtx, LaError, SparseVec};

/// Incremental row space of sparse vectors, kept in fully reduced echelon
/// form: each stored row has a leading 1 and is zero in every other pivot
/// column.
#[derive(Debug, Clone)]
pub struct RankTracker {
    field: FieldCtx,
    dim: usize,
    rows: BTreeMap<u32, SparseVec>,
}

impl RankTracker {
    pub fn new(field: FieldCtx, dim: usize) -> Self {
        Self { field, dim, rows: BTreeMap::new() }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn check_dim(&self, v: &SparseVec) -> Result<(), LaError> {
        if v.dim() != self.dim {
            return Err(LaError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Ok(())
    }

    /// Residual of `v` modulo the current span.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, LaError> {
        self.check_dim(v)?;
        let f = &self.field;
        let mut r = v.clone();
        // Rows are fully reduced, so the coefficient for each pivot can be
        // read from the original vector.
        for &(col, c) in v.entries() {
            if let Some(row) = self.rows.get(&col) {
                r = r.add_scaled(f.neg(c), row, f);
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LaError> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Result<bool, LaError> {
        let r = self.reduce(v)?;
        let Some(pivot) = r.leading() else {
            return Ok(false);
        };
        let f = self.field;
        let lead = r.get(pivot);
        let r = r.scale(f.inv(lead).expect("nonzero leading entry"), &f);
        let col = pivot as u32;
        for row in self.rows.values_mut() {
            let c = row.get(pivot);
            if c != 0 {
                *row = row.add_scaled(f.neg(c), &r, &f);
            }
        }
        self.rows.insert(col, r);
        Ok(true)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().map(|&c| c as usize)
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_rank(rows: &[Vec<u32>], f: &FieldCtx) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = f.inv(m[rank][col]).unwrap();
            for r in 0..m.len() {
                if r != rank && m[r][col] != 0 {
                    let c = f.mul(m[r][col], inv);
                    for k in 0..ncols {
                        m[r][k] = f.sub(m[r][k], f.mul(c, m[rank][k]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn matches_dense_elimination() {
        let f = FieldCtx::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let ncols = 30;
            let nrows = 10 + trial;
            let basis_rows = rng.gen_range(1..ncols);
            let base: Vec<Vec<u32>> = (0..basis_rows)
                .map(|_| (0..ncols).map(|_| if rng.gen_bool(0.2) { rng.gen_range(1..1_000_003) } else { 0 }).collect())
                .collect();
            let rows: Vec<Vec<u32>> = (0..nrows)
                .map(|_| {
                    let mut v = vec![0u32; ncols];
                    for b in &base {
                        if rng.gen_bool(0.3) {
                            let c = rng.gen_range(0..1_000_003);
                            for k in 0..ncols {
                                v[k] = f.add(v[k], f.mul(c, b[k]));
                            }
                        }
                    }
                    v
                })
                .collect();
            let mut t = RankTracker::new(f, ncols);
            for r in &rows {
                t.insert(&SparseVec::from_dense(r)).unwrap();
            }
            assert_eq!(t.rank(), dense_rank(&rows, &f));
            for r in &rows {
                assert!(t.contains(&SparseVec::from_dense(r)).unwrap());
            }
        }
    }

    #[test]
    fn rows_stay_fully_reduced() {
        let f = FieldCtx::new(101).unwrap();
        let mut t = RankTracker::new(f, 4);
        for v in [[1, 2, 3, 4], [0, 1, 5, 0], [2, 2, 0, 1], [1, 0, 0, 0]] {
            t.insert(&SparseVec::from_dense(&v)).unwrap();
        }
        let pivots: Vec<usize> = t.pivots().collect();
        for row in t.basis() {
            let lead = row.leading().unwrap();
            assert_eq!(row.get(lead), 1);
            for &p in &pivots {
                if p != lead {
                    assert_eq!(row.get(p), 0);
                }
            }
        }
    }

    #[test]
    fn saturation_and_zero_vectors() {
        let f = FieldCtx::new(7).unwrap();
        let mut t = RankTracker::new(f, 3);
        assert!(!t.insert(&SparseVec::zero(3)).unwrap());
        for i in 0..3 {
            let mut v = vec![0; 3];
            v[i] = 3;
            assert!(t.insert(&SparseVec::from_dense(&v)).unwrap());
        }
        assert!(t.is_full());
        assert!(!t.insert(&SparseVec::from_dense(&[1, 2, 3])).unwrap());
        assert!(t.insert(&SparseVec::zero(4)).is_err());
    }

    proptest! {
        #[test]
        fn rank_never_exceeds_inserted_or_dim(seed in 0u64..500, n in 1usize..15) {
            let f = FieldCtx::new(13).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = RankTracker::new(f, 8);
            for k in 1..=n {
                let v: Vec<u32> = (0..8).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..13) } else { 0 }).collect();
                let grew = t.insert(&SparseVec::from_dense(&v)).unwrap();
                prop_assert!(t.rank() <= k.min(8));
                prop_assert!(t.contains(&SparseVec::from_dense(&v)).unwrap());
                if grew { prop_assert!(t.rank() >= 1); }
            }
        }
    }
}
