//! The conjugacy-class association scheme of a finite group.
//!
//! Vertices are group elements and `(x, y)` lies in relation `i` iff
//! `x⁻¹y` lies in conjugacy class `i`. Adjacency matrices are never
//! materialized; rows are generated on demand from the multiplication table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::groups::{conjugacy_classes, ConjugacyData, GroupTable};

#[derive(Debug, Clone)]
pub struct ClassScheme {
    pub group: GroupTable,
    pub classes: ConjugacyData,
}

pub fn build_scheme(group: GroupTable) -> ClassScheme {
    let classes = conjugacy_classes(&group);
    ClassScheme { group, classes }
}

impl ClassScheme {
    /// Number of relations `d + 1`.
    pub fn num_relations(&self) -> usize {
        self.classes.num_classes()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn relation_of(&self, x: usize, y: usize) -> usize {
        self.classes.class_of(self.group.mul(self.group.inv(x), y))
    }

    /// Members of class `c` (the vertices at relation `c` from the identity).
    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.classes.members[c]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes.sizes[c]
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.label_strings()
    }
}

/// A relation map on `{0, .., order-1}²`, the input of [`verify_axioms`].
pub trait RelationMap: Sync {
    fn order(&self) -> usize;
    fn num_relations(&self) -> usize;
    fn relation(&self, x: usize, y: usize) -> usize;
}

impl RelationMap for ClassScheme {
    fn order(&self) -> usize {
        self.group.order()
    }

    fn num_relations(&self) -> usize {
        self.classes.num_classes()
    }

    fn relation(&self, x: usize, y: usize) -> usize {
        self.relation_of(x, y)
    }
}

/// One nonzero intersection number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntersectionEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub p: u64,
}

/// The intersection numbers `p_ij^k`, stored densely and exposed sparsely.
#[derive(Debug, Clone)]
pub struct IntersectionTensor {
    r: usize,
    values: Vec<u64>,
}

impl IntersectionTensor {
    /// Number of relations `d + 1`.
    pub fn num_relations(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.values[(i * self.r + j) * self.r + k]
    }

    /// Nonzero entries sorted by `(i, j, k)`.
    pub fn entries(&self) -> Vec<IntersectionEntry> {
        let r = self.r;
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let p = self.get(i, j, k);
                    if p != 0 {
                        out.push(IntersectionEntry { i, j, k, p });
                    }
                }
            }
        }
        out
    }

    /// `dim T₀`: the number of nonzero intersection numbers.
    pub fn dim_t0(&self) -> usize {
        self.values.iter().filter(|&&p| p != 0).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.entries()).expect("entries serialize")
    }
}

/// `p_ij^k` counted from the representative pair `(1, g_k)`:
/// `#{z ∈ C_i : z⁻¹ g_k ∈ C_j}`.
pub fn intersection_numbers(scheme: &ClassScheme) -> IntersectionTensor {
    let r = scheme.num_relations();
    let g = &scheme.group;
    let columns: Vec<Vec<u64>> = (0..r)
        .into_par_iter()
        .map(|k| {
            let gk = scheme.classes.representatives[k];
            let mut col = vec![0u64; r * r];
            for i in 0..r {
                for &z in scheme.class_members(i) {
                    let j = scheme.classes.class_of(g.mul(g.inv(z), gk));
                    col[i * r + j] += 1;
                }
            }
            col
        })
        .collect();
    let mut values = vec![0u64; r * r * r];
    for (k, col) in columns.iter().enumerate() {
        for (ij, &p) in col.iter().enumerate() {
            values[ij * r + k] = p;
        }
    }
    IntersectionTensor { r, values }
}

/// `dim T₀` for a scheme.
pub fn dim_t0(tensor: &IntersectionTensor) -> usize {
    tensor.dim_t0()
}

/// `dim End_G(V)` for the conjugation action: `Σ |G| / |C_i|`.
pub fn conj_centralizer_dim(classes: &ConjugacyData) -> u64 {
    let order: usize = classes.sizes.iter().sum();
    classes.sizes.iter().map(|&s| (order / s) as u64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomMode {
    /// Every pair, and every pair of each relation for intersection numbers.
    Full,
    /// A seeded sample of pairs.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    /// A pair was assigned a relation index outside `0..=d`.
    OutOfRange { x: usize, y: usize, relation: usize },
    /// Relation 0 is not exactly the diagonal.
    Diagonal { x: usize, y: usize, relation: usize },
    /// Some relation has no pairs.
    EmptyRelation { relation: usize },
    /// Pairs of one relation have converses in different relations.
    Converse { relation: usize, x: usize, y: usize, converse: usize, expected: usize },
    /// `p_ij^k` depends on the chosen pair in `S_k`.
    Intersection { i: usize, j: usize, k: usize, x: usize, y: usize, expected: u64, found: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub mode: AxiomMode,
    pub pairs_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the association-scheme axioms. Violations are reported, never
/// raised.
pub fn verify_axioms<M: RelationMap + ?Sized>(map: &M, mode: AxiomMode) -> AxiomReport {
    let n = map.order();
    let r = map.num_relations();
    let mut violations = Vec::new();

    let pairs: Vec<(usize, usize)> = match mode {
        AxiomMode::Full => (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect(),
        AxiomMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
            v.extend((0..pairs).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
            v
        }
    };

    let mut seen = vec![false; r];
    let mut converse_of: Vec<Option<usize>> = vec![None; r];
    let mut reference: Vec<Option<(usize, usize)>> = vec![None; r];
    for &(x, y) in &pairs {
        let rel = map.relation(x, y);
        if rel >= r {
            violations.push(AxiomViolation::OutOfRange { x, y, relation: rel });
            continue;
        }
        seen[rel] = true;
        if (rel == 0) != (x == y) {
            violations.push(AxiomViolation::Diagonal { x, y, relation: rel });
        }
        let conv = map.relation(y, x);
        match converse_of[rel] {
            None => converse_of[rel] = Some(conv),
            Some(expected) if expected != conv => violations.push(AxiomViolation::Converse {
                relation: rel,
                x,
                y,
                converse: conv,
                expected,
            }),
            _ => {}
        }
        if reference[rel].is_none() {
            reference[rel] = Some((x, y));
        }
    }
    if mode == AxiomMode::Full {
        for (relation, &s) in seen.iter().enumerate() {
            if !s {
                violations.push(AxiomViolation::EmptyRelation { relation });
            }
        }
    }

    let counts = |x: usize, y: usize| -> Vec<u64> {
        let mut c = vec![0u64; r * r];
        for z in 0..n {
            let i = map.relation(x, z);
            let j = map.relation(z, y);
            if i < r && j < r {
                c[i * r + j] += 1;
            }
        }
        c
    };
    let refs: Vec<Option<Vec<u64>>> =
        reference.iter().map(|p| p.map(|(x, y)| counts(x, y))).collect();
    let found: Vec<AxiomViolation> = pairs
        .par_iter()
        .filter_map(|&(x, y)| {
            let k = map.relation(x, y);
            let expected = refs.get(k)?.as_ref()?;
            let c = counts(x, y);
            let idx = (0..r * r).find(|&ij| c[ij] != expected[ij])?;
            Some(AxiomViolation::Intersection {
                i: idx / r,
                j: idx % r,
                k,
                x,
                y,
                expected: expected[idx],
                found: c[idx],
            })
        })
        .collect();
    violations.extend(found);

    AxiomReport { mode, pairs_checked: pairs.len(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{fixtures, GroupTable, DEFAULT_MAX_ORDER};

    fn sym_scheme(n: u32) -> ClassScheme {
        build_scheme(GroupTable::symmetric(n, DEFAULT_MAX_ORDER).unwrap())
    }

    #[test]
    fn relation_counts() {
        assert_eq!(sym_scheme(3).num_relations(), 3);
        let s4 = sym_scheme(4);
        for x in 0..24 {
            assert_eq!(s4.relation_of(x, x), 0);
        }
    }

    #[test]
    fn dim_t0_small_cases() {
        let t3 = intersection_numbers(&sym_scheme(3));
        assert_eq!(t3.get(0, 0, 0), 1);
        assert_eq!(dim_t0(&t3), 11);
        assert_eq!(dim_t0(&intersection_numbers(&sym_scheme(4))), 42);
        assert_eq!(dim_t0(&intersection_numbers(&sym_scheme(5))), 124);
        assert_eq!(dim_t0(&intersection_numbers(&sym_scheme(6))), 447);
    }

    #[test]
    fn tensor_identities() {
        for n in 3..=6 {
            let s = sym_scheme(n);
            let t = intersection_numbers(&s);
            let r = s.num_relations();
            for i in 0..r {
                for k in 0..r {
                    // each z in C_i lands in exactly one C_j
                    let row: u64 = (0..r).map(|j| t.get(i, j, k)).sum();
                    assert_eq!(row, s.class_size(i) as u64);
                    for j in 0..r {
                        assert_eq!(t.get(0, j, k), u64::from(j == k));
                        assert_eq!(t.get(i, j, k), t.get(j, i, k), "commutative");
                    }
                }
            }
        }
    }

    #[test]
    fn centralizer_dims() {
        assert_eq!(conj_centralizer_dim(&sym_scheme(3).classes), 11);
        assert_eq!(conj_centralizer_dim(&sym_scheme(4).classes), 43);
        let trivial = sym_scheme(1);
        assert_eq!(conj_centralizer_dim(&trivial.classes), 1);
        assert_eq!(dim_t0(&intersection_numbers(&trivial)), 1);
    }

    #[test]
    fn tensor_json_sorted() {
        let t = intersection_numbers(&sym_scheme(3));
        let json = t.to_json();
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 11);
        assert_eq!(arr[0], serde_json::json!({"i": 0, "j": 0, "k": 0, "p": 1}));
        let keys: Vec<(u64, u64, u64)> = arr
            .iter()
            .map(|e| (e["i"].as_u64().unwrap(), e["j"].as_u64().unwrap(), e["k"].as_u64().unwrap()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn axioms_hold_for_s5_full() {
        let report = verify_axioms(&sym_scheme(5), AxiomMode::Full);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.pairs_checked, 120 * 120);
    }

    #[test]
    fn axioms_hold_for_s6_sampled() {
        let report = verify_axioms(&sym_scheme(6), AxiomMode::Sampled { pairs: 10_000, seed: 7 });
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn axioms_hold_for_cayley_tables() {
        for text in [fixtures::quaternion(), fixtures::cyclic(5)] {
            let s = build_scheme(GroupTable::from_cayley_str(&text, DEFAULT_MAX_ORDER).unwrap());
            assert!(verify_axioms(&s, AxiomMode::Full).passed());
            let t = intersection_numbers(&s);
            assert!(t.dim_t0() as u64 <= conj_centralizer_dim(&s.classes));
        }
    }

    struct Corrupted<'a> {
        inner: &'a ClassScheme,
        pair: (usize, usize),
        value: usize,
    }

    impl RelationMap for Corrupted<'_> {
        fn order(&self) -> usize {
            self.inner.order()
        }
        fn num_relations(&self) -> usize {
            self.inner.num_relations()
        }
        fn relation(&self, x: usize, y: usize) -> usize {
            if (x, y) == self.pair {
                self.value
            } else {
                self.inner.relation_of(x, y)
            }
        }
    }

    #[test]
    fn corrupted_maps_are_reported() {
        let s = sym_scheme(4);
        let out_of_range = Corrupted { inner: &s, pair: (3, 5), value: 99 };
        let report = verify_axioms(&out_of_range, AxiomMode::Full);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::OutOfRange { x: 3, y: 5, relation: 99 })));

        let off_diagonal = Corrupted { inner: &s, pair: (3, 5), value: 0 };
        let report = verify_axioms(&off_diagonal, AxiomMode::Full);
        assert!(report.violations.iter().any(|v| matches!(v, AxiomViolation::Diagonal { .. })));

        let wrong_class = Corrupted { inner: &s, pair: (3, 5), value: (s.relation_of(3, 5) % 4) + 1 };
        let report = verify_axioms(&wrong_class, AxiomMode::Full);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::Intersection { .. } | AxiomViolation::Converse { .. })));
    }
}
