//! The centralizer algebra `End_{H₁}(V)` in its orbital basis.
//!
//! An element supported on block `(i, k)` is a vector indexed by the
//! orbitals of that block; its matrix has entry `u[orb(x, y)]` at
//! `(x, y) ∈ C_i × C_k`. Every product of length-1 switching factors lives
//! here, so all closure and idempotent work runs in these coordinates.

use crate::exactla::{FieldCtx, SparseMat};
use crate::groups::{ConjugacyData, GroupTable};
use crate::orbitals::Orbitals;

/// Structure constants for products `(i, k) × (k, m) → (i, m)`.
///
/// For each target orbital `c` with representative `(x, y)`, the entries
/// `(a, b, n)` say that `n` elements `z ∈ C_k` have `orb(x, z) = a` and
/// `orb(z, y) = b` (local indices).
#[derive(Debug, Clone)]
pub struct TripleConstants {
    pub blocks: (usize, usize, usize),
    offsets: Vec<u32>,
    entries: Vec<(u16, u16, u32)>,
}

impl TripleConstants {
    pub fn target_len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn for_target(&self, c: usize) -> &[(u16, u16, u32)] {
        &self.entries[self.offsets[c] as usize..self.offsets[c + 1] as usize]
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

pub struct OrbitalAlgebra<'a> {
    pub group: &'a GroupTable,
    pub classes: &'a ConjugacyData,
    pub orbitals: &'a Orbitals,
}

impl<'a> OrbitalAlgebra<'a> {
    pub fn new(group: &'a GroupTable, classes: &'a ConjugacyData, orbitals: &'a Orbitals) -> Self {
        Self { group, classes, orbitals }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.num_classes()
    }

    pub fn block_dim(&self, i: usize, k: usize) -> usize {
        self.orbitals.block_size(i, k)
    }

    /// Middle-class label of each orbital in block `(i, k)`.
    pub fn labels(&self, i: usize, k: usize) -> Vec<usize> {
        self.orbitals.block_info(i, k).iter().map(|o| o.label as usize).collect()
    }

    pub fn constants(&self, i: usize, k: usize, m: usize) -> TripleConstants {
        let na = self.block_dim(i, k);
        let nb = self.block_dim(k, m);
        assert!(na <= u16::MAX as usize && nb <= u16::MAX as usize, "block too large for u16 indices");
        let mut counts = vec![0u32; na * nb];
        let mut touched: Vec<u32> = Vec::new();
        let mut offsets = vec![0u32];
        let mut entries = Vec::new();
        for info in self.orbitals.block_info(i, m) {
            let (x, y) = (info.rep.0 as usize, info.rep.1 as usize);
            for &z in &self.classes.members[k] {
                let cell = self.orbitals.local(x, z) * nb + self.orbitals.local(z, y);
                if counts[cell] == 0 {
                    touched.push(cell as u32);
                }
                counts[cell] += 1;
            }
            touched.sort_unstable();
            for &cell in &touched {
                let cell = cell as usize;
                entries.push(((cell / nb) as u16, (cell % nb) as u16, counts[cell]));
                counts[cell] = 0;
            }
            touched.clear();
            offsets.push(entries.len() as u32);
        }
        TripleConstants { blocks: (i, k, m), offsets, entries }
    }

    /// `u·v` for `u` on `(i, k)` and `v` on `(k, m)`.
    pub fn multiply(&self, consts: &TripleConstants, u: &[u32], v: &[u32], field: &FieldCtx) -> Vec<u32> {
        let p = field.prime();
        (0..consts.target_len())
            .map(|c| {
                let mut acc = 0u64;
                for &(a, b, n) in consts.for_target(c) {
                    let (ua, vb) = (u[a as usize], v[b as usize]);
                    if ua != 0 && vb != 0 {
                        acc = (acc + (n as u64 % p) * (ua as u64) % p * (vb as u64)) % p;
                    }
                }
                acc as u32
            })
            .collect()
    }

    /// Products of `u` (on `(i, k)`) with every length-1 factor
    /// `E_k A_j E_m`, returned as one vector per middle class `j`.
    pub fn multiply_by_factors(&self, consts: &TripleConstants, u: &[u32], right_labels: &[usize], field: &FieldCtx) -> Vec<Vec<u32>> {
        let p = field.prime();
        let r = self.num_classes();
        let len = consts.target_len();
        let mut acc = vec![vec![0u64; len]; r];
        for c in 0..len {
            for &(a, b, n) in consts.for_target(c) {
                let ua = u[a as usize];
                if ua != 0 {
                    let slot = &mut acc[right_labels[b as usize]][c];
                    *slot = (*slot + (n as u64 % p) * ua as u64) % p;
                }
            }
        }
        acc.into_iter().map(|row| row.into_iter().map(|v| v as u32).collect()).collect()
    }

    /// The length-1 factor `E_i A_j E_k` as a 0/1 vector, or `None` when it
    /// is zero.
    pub fn factor(&self, i: usize, j: usize, k: usize) -> Option<Vec<u32>> {
        let v: Vec<u32> = self.labels(i, k).into_iter().map(|l| u32::from(l == j)).collect();
        v.iter().any(|&x| x != 0).then_some(v)
    }

    /// The `|C_i| × |C_k|` matrix of an orbital-coordinate vector.
    pub fn expand(&self, u: &[u32], i: usize, k: usize) -> SparseMat {
        let rows = self.classes.members[i]
            .iter()
            .map(|&x| {
                self.classes.members[k]
                    .iter()
                    .enumerate()
                    .filter_map(|(col, &y)| {
                        let v = u[self.orbitals.local(x, y)];
                        (v != 0).then_some((col as u32, v))
                    })
                    .collect()
            })
            .collect();
        SparseMat::from_rows(self.classes.sizes[k], rows).expect("sorted columns")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::restrict_block;
    use crate::groups::{conjugacy_classes, DEFAULT_MAX_ORDER};
    use crate::orbitals::{H1Action, DEFAULT_PAIR_BUDGET};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn products_agree_with_matrix_products() {
        let f = FieldCtx::new(1_000_003).unwrap();
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let c = conjugacy_classes(&g);
        let action = H1Action::new(&g, &c);
        let orb = Orbitals::compute(&g, &c, &action, DEFAULT_PAIR_BUDGET).unwrap();
        let alg = OrbitalAlgebra::new(&g, &c, &orb);
        let r = c.num_classes();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..r {
            for k in 0..r {
                for m in 0..r {
                    let consts = alg.constants(i, k, m);
                    let u: Vec<u32> = (0..alg.block_dim(i, k)).map(|_| rng.gen_range(0..1000)).collect();
                    let v: Vec<u32> = (0..alg.block_dim(k, m)).map(|_| rng.gen_range(0..1000)).collect();
                    let prod = alg.multiply(&consts, &u, &v, &f);
                    let raw = alg.expand(&u, i, k).spmm(&alg.expand(&v, k, m), &f).unwrap();
                    assert_eq!(alg.expand(&prod, i, m), raw);
                    let by_factor = alg.multiply_by_factors(&consts, &u, &alg.labels(k, m), &f);
                    for (j, w) in by_factor.iter().enumerate() {
                        let expected = match alg.factor(k, j, m) {
                            Some(fv) => alg.multiply(&consts, &u, &fv, &f),
                            None => vec![0; alg.block_dim(i, m)],
                        };
                        assert_eq!(w, &expected);
                    }
                }
            }
        }
    }

    #[test]
    fn factors_expand_to_restricted_adjacency_blocks() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let c = conjugacy_classes(&g);
        let action = H1Action::new(&g, &c);
        let orb = Orbitals::compute(&g, &c, &action, DEFAULT_PAIR_BUDGET).unwrap();
        let alg = OrbitalAlgebra::new(&g, &c, &orb);
        let r = c.num_classes();
        let mut nonzero = 0;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let raw = restrict_block(&g, &c, i, j, k);
                    match alg.factor(i, j, k) {
                        Some(v) => {
                            nonzero += 1;
                            assert_eq!(alg.expand(&v, i, k), raw);
                        }
                        None => assert!(raw.is_zero()),
                    }
                }
            }
        }
        assert_eq!(nonzero, 42);
    }
}
