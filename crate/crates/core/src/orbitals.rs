//! Orbits of the identity stabilizer `H₁ = ⟨Inn(G), x ↦ x⁻¹⟩` on `G` and on
//! `G × G`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::groups::{inversion_closed, ConjugacyData, GroupTable};
use crate::tables::BlockTable;

/// Default cap on `|G|²`; S7 needs about 25.4M pairs.
pub const DEFAULT_PAIR_BUDGET: usize = 1 << 26;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrbitalError {
    #[error("pair table needs {pairs} cells, budget is {budget}")]
    MemoryBudget { pairs: usize, budget: usize },
    #[error("orbit-counting sum {numerator}/{denominator} is not an integer")]
    NonIntegral { numerator: u128, denominator: u128 },
}

/// Generators of `H₁` as permutations of element indices.
#[derive(Debug, Clone)]
pub struct H1Action {
    maps: Vec<Vec<u32>>,
    with_inversion: bool,
}

impl H1Action {
    /// Conjugation by each group generator, plus inversion when every class
    /// is inversion-closed.
    pub fn new(group: &GroupTable, classes: &ConjugacyData) -> Self {
        let mut maps: Vec<Vec<u32>> = group.generators().iter().map(|&g| group.conjugation_map(g)).collect();
        let with_inversion = inversion_closed(classes);
        if with_inversion {
            maps.push(group.inversion_map());
        }
        Self { maps, with_inversion }
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn with_inversion(&self) -> bool {
        self.with_inversion
    }

    /// `|H₁|` counted as `|G × C2|` (or `|G|`), which is the uniform cover
    /// used by every averaging formula here.
    pub fn cover_order(&self, group_order: usize) -> u64 {
        group_order as u64 * if self.with_inversion { 2 } else { 1 }
    }
}

/// One orbit of `H₁` on `G × G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitalInfo {
    /// `(class_of(x), class_of(y))`.
    pub block: (u32, u32),
    /// Index among the orbitals of the same block.
    pub local: u32,
    /// First pair `(x, y)` of the orbit in row-major order.
    pub rep: (u32, u32),
    /// Class of `x⁻¹y`.
    pub label: u32,
}

/// Orbit id of every pair, with ids grouped by block in row-major block
/// order.
#[derive(Debug, Clone)]
pub struct Orbitals {
    order: usize,
    num_classes: usize,
    ids: Vec<u32>,
    info: Vec<OrbitalInfo>,
    block_start: Vec<u32>,
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else if ka > kb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[rb as usize] = ra;
            self.rank[ra as usize] += 1;
        }
    }
}

impl Orbitals {
    pub fn compute(
        group: &GroupTable,
        classes: &ConjugacyData,
        action: &H1Action,
        budget: usize,
    ) -> Result<Self, OrbitalError> {
        let n = group.order();
        let pairs = n * n;
        if pairs > budget || pairs > u32::MAX as usize {
            return Err(OrbitalError::MemoryBudget { pairs, budget });
        }
        let mut uf = UnionFind::new(pairs);
        for map in action.maps() {
            for x in 0..n {
                let gx = map[x] as usize;
                for y in 0..n {
                    let gy = map[y] as usize;
                    uf.union((x * n + y) as u32, (gx * n + gy) as u32);
                }
            }
        }
        for p in 0..pairs as u32 {
            let root = uf.find(p);
            uf.parent[p as usize] = root;
        }
        drop(uf.rank);
        let mut ids = uf.parent;

        // First-appearance ids, then regroup by block.
        let r = classes.num_classes();
        let mut first_id: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<(u32, u32)> = Vec::new();
        for (p, slot) in ids.iter_mut().enumerate() {
            let next = first_id.len() as u32;
            let id = *first_id.entry(*slot).or_insert_with(|| {
                reps.push(((p / n) as u32, (p % n) as u32));
                next
            });
            *slot = id;
        }
        let mut per_block: Vec<Vec<u32>> = vec![Vec::new(); r * r];
        for (id, &(x, y)) in reps.iter().enumerate() {
            let b = classes.class_of(x as usize) * r + classes.class_of(y as usize);
            per_block[b].push(id as u32);
        }
        let mut remap = vec![0u32; reps.len()];
        let mut info = Vec::with_capacity(reps.len());
        let mut block_start = Vec::with_capacity(r * r + 1);
        for (b, members) in per_block.iter().enumerate() {
            block_start.push(info.len() as u32);
            for (local, &old) in members.iter().enumerate() {
                remap[old as usize] = info.len() as u32;
                let (x, y) = reps[old as usize];
                let label = classes.class_of(group.mul(group.inv(x as usize), y as usize)) as u32;
                info.push(OrbitalInfo { block: ((b / r) as u32, (b % r) as u32), local: local as u32, rep: (x, y), label });
            }
        }
        block_start.push(info.len() as u32);
        ids.par_iter_mut().for_each(|id| *id = remap[*id as usize]);
        Ok(Self { order: n, num_classes: r, ids, info, block_start })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn total(&self) -> usize {
        self.info.len()
    }

    pub fn info(&self, id: usize) -> &OrbitalInfo {
        &self.info[id]
    }

    /// Global orbital id of `(x, y)`.
    #[inline]
    pub fn id(&self, x: usize, y: usize) -> usize {
        self.ids[x * self.order + y] as usize
    }

    /// Index of `(x, y)` among its block's orbitals.
    #[inline]
    pub fn local(&self, x: usize, y: usize) -> usize {
        self.info[self.id(x, y)].local as usize
    }

    /// Global ids of block `(i, k)`.
    pub fn block_range(&self, i: usize, k: usize) -> std::ops::Range<usize> {
        let b = i * self.num_classes + k;
        self.block_start[b] as usize..self.block_start[b + 1] as usize
    }

    pub fn block_size(&self, i: usize, k: usize) -> usize {
        self.block_range(i, k).len()
    }

    pub fn block_info(&self, i: usize, k: usize) -> &[OrbitalInfo] {
        &self.info[self.block_range(i, k)]
    }

    pub fn table(&self, labels: Vec<String>) -> BlockTable {
        let r = self.num_classes;
        let dims = (0..r).map(|i| (0..r).map(|k| self.block_size(i, k)).collect()).collect();
        BlockTable::new(labels, dims)
    }

    /// True iff each class's diagonal pairs form a single orbital and no
    /// two classes share one, i.e. `H₁`-orbits on `G` are the classes.
    pub fn point_orbits_are_classes(&self, classes: &ConjugacyData) -> bool {
        let mut seen = vec![usize::MAX; self.total()];
        for (c, members) in classes.members.iter().enumerate() {
            let id = self.id(members[0], members[0]);
            if seen[id] != usize::MAX {
                return false;
            }
            seen[id] = c;
            if members.iter().any(|&x| self.id(x, x) != id) {
                return false;
            }
        }
        true
    }
}

/// The number of orbitals of `H₁` on `G × G` by orbit counting, summed
/// class-wise: conjugation by `g` fixes `|C_G(g)|` points and
/// `x ↦ g x⁻¹ g⁻¹` fixes `#{x : g x⁻¹ g⁻¹ = x}`.
pub fn burnside_orbital_count(group: &GroupTable, classes: &ConjugacyData) -> Result<u64, OrbitalError> {
    let n = group.order() as u128;
    let with_inversion = inversion_closed(classes);
    let terms: Vec<u128> = (0..classes.num_classes())
        .into_par_iter()
        .map(|c| {
            let size = classes.sizes[c] as u128;
            let g = classes.representatives[c];
            let plus = n / size;
            let mut term = size * plus * plus;
            if with_inversion {
                let minus = inverted_fixed_points(group, g) as u128;
                term += size * minus * minus;
            }
            term
        })
        .collect();
    let numerator: u128 = terms.iter().sum();
    let denominator = n * if with_inversion { 2 } else { 1 };
    if !numerator.is_multiple_of(denominator) {
        return Err(OrbitalError::NonIntegral { numerator, denominator });
    }
    Ok((numerator / denominator) as u64)
}

/// `#{x : g x⁻¹ g⁻¹ = x}`.
pub fn inverted_fixed_points(group: &GroupTable, g: usize) -> usize {
    let gi = group.inv(g);
    (0..group.order()).filter(|&x| group.mul(group.mul(g, group.inv(x)), gi) == x).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugacy_classes, fixtures, DEFAULT_MAX_ORDER};

    fn orbitals_of(group: &GroupTable) -> (ConjugacyData, Orbitals) {
        let classes = conjugacy_classes(group);
        let action = H1Action::new(group, &classes);
        let orb = Orbitals::compute(group, &classes, &action, DEFAULT_PAIR_BUDGET).unwrap();
        (classes, orb)
    }

    /// Orbits by explicit closure under the full group `H₁`, enumerated as
    /// maps `x ↦ g x^{±1} g⁻¹`.
    fn brute_force_count(group: &GroupTable, inversion: bool) -> usize {
        let n = group.order();
        let mut elements: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            for s in [false, true] {
                if s && !inversion {
                    continue;
                }
                let map: Vec<usize> = (0..n)
                    .map(|x| {
                        let x = if s { group.inv(x) } else { x };
                        group.conj(g, x)
                    })
                    .collect();
                elements.push(map);
            }
        }
        let mut seen = vec![false; n * n];
        let mut count = 0;
        for p in 0..n * n {
            if seen[p] {
                continue;
            }
            count += 1;
            let (x, y) = (p / n, p % n);
            for h in &elements {
                seen[h[x] * n + h[y]] = true;
            }
        }
        count
    }

    #[test]
    fn s4_table_and_total() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let (classes, orb) = orbitals_of(&g);
        assert_eq!(orb.total(), 43);
        let t = orb.table(classes.label_strings());
        let expected = vec![
            vec![1, 1, 1, 1, 1],
            vec![1, 3, 2, 2, 2],
            vec![1, 2, 2, 1, 2],
            vec![1, 2, 1, 4, 2],
            vec![1, 2, 2, 2, 3],
        ];
        assert_eq!(t.dims(), &expected);
        assert!(orb.point_orbits_are_classes(&classes));
    }

    #[test]
    fn totals_match_brute_force_and_burnside() {
        for n in 1..=5 {
            let g = GroupTable::symmetric(n, DEFAULT_MAX_ORDER).unwrap();
            let (classes, orb) = orbitals_of(&g);
            assert_eq!(orb.total(), brute_force_count(&g, true), "S{n}");
            assert_eq!(burnside_orbital_count(&g, &classes).unwrap() as usize, orb.total());
        }
        for text in [fixtures::quaternion(), fixtures::cyclic(5), fixtures::cyclic(6)] {
            let g = GroupTable::from_cayley_str(&text, DEFAULT_MAX_ORDER).unwrap();
            let (classes, orb) = orbitals_of(&g);
            let inversion = inversion_closed(&classes);
            assert_eq!(orb.total(), brute_force_count(&g, inversion));
            assert_eq!(burnside_orbital_count(&g, &classes).unwrap() as usize, orb.total());
        }
    }

    #[test]
    fn small_golden_totals() {
        let g = GroupTable::symmetric(3, DEFAULT_MAX_ORDER).unwrap();
        let classes = conjugacy_classes(&g);
        assert_eq!(burnside_orbital_count(&g, &classes).unwrap(), 11);
        let trivial = GroupTable::symmetric(1, DEFAULT_MAX_ORDER).unwrap();
        let tc = conjugacy_classes(&trivial);
        assert_eq!(burnside_orbital_count(&trivial, &tc).unwrap(), 1);
        // S3 involutions plus the identity.
        let s3_identity = classes.representatives[0];
        assert_eq!(inverted_fixed_points(&g, s3_identity), 4);
    }

    #[test]
    fn ids_are_consistent_with_info() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let (classes, orb) = orbitals_of(&g);
        for x in 0..g.order() {
            for y in 0..g.order() {
                let info = orb.info(orb.id(x, y));
                assert_eq!(info.block, (classes.class_of(x) as u32, classes.class_of(y) as u32));
                assert_eq!(info.label as usize, classes.class_of(g.mul(g.inv(x), y)));
                assert_eq!(orb.id(info.rep.0 as usize, info.rep.1 as usize), orb.id(x, y));
            }
        }
        for i in 0..classes.num_classes() {
            for k in 0..classes.num_classes() {
                for (local, info) in orb.block_info(i, k).iter().enumerate() {
                    assert_eq!(info.local as usize, local);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = GroupTable::symmetric(4, DEFAULT_MAX_ORDER).unwrap();
        let classes = conjugacy_classes(&g);
        let action = H1Action::new(&g, &classes);
        let err = Orbitals::compute(&g, &classes, &action, 100).unwrap_err();
        assert_eq!(err, OrbitalError::MemoryBudget { pairs: 576, budget: 100 });
    }
}
