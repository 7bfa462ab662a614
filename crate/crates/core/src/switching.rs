//! Closure of the length-1 switching factors `E_i A_j E_k` under
//! multiplication, level by level.

use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::centralizer::OrbitalAlgebra;
use crate::exactla::{restrict_block, vectorize, FieldCtx, LaError, RankTracker, SparseMat, SparseVec};
use crate::groups::{ConjugacyData, GroupTable};
use crate::tables::BlockTable;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SwitchingError {
    #[error("block ({row},{col}) reached rank {rank}, above its bound {bound}")]
    BoundExceeded { row: usize, col: usize, rank: usize, bound: usize },
    #[error("still growing after {max_width} extensions")]
    WidthExceeded { max_width: usize },
    #[error(transparent)]
    Linear(#[from] LaError),
}

/// A way of storing block elements and multiplying them.
pub trait BlockRepresentation: Sync {
    type Elem: Clone + Send + Sync;

    fn num_classes(&self) -> usize;

    fn ambient_dim(&self, i: usize, k: usize) -> usize;

    /// Nonzero factors `E_i A_j E_k` with their middle class `j`, ascending.
    fn factors(&self, i: usize, k: usize) -> Vec<(usize, Self::Elem)>;

    fn vectorize(&self, e: &Self::Elem, i: usize, k: usize) -> SparseVec;

    /// For each left element on `(i, k)`, its products with every nonzero
    /// factor on `(k, m)`, ordered by the factor's middle class.
    fn right_products(&self, lefts: &[&Self::Elem], i: usize, k: usize, m: usize, field: &FieldCtx) -> Vec<Vec<(usize, Self::Elem)>>;
}

/// Elements as vectors over the `H₁`-orbitals of each block.
pub struct OrbitalRoute<'a> {
    pub algebra: &'a OrbitalAlgebra<'a>,
}

impl BlockRepresentation for OrbitalRoute<'_> {
    type Elem = Vec<u32>;

    fn num_classes(&self) -> usize {
        self.algebra.num_classes()
    }

    fn ambient_dim(&self, i: usize, k: usize) -> usize {
        self.algebra.block_dim(i, k)
    }

    fn factors(&self, i: usize, k: usize) -> Vec<(usize, Vec<u32>)> {
        (0..self.num_classes()).filter_map(|j| self.algebra.factor(i, j, k).map(|v| (j, v))).collect()
    }

    fn vectorize(&self, e: &Vec<u32>, _i: usize, _k: usize) -> SparseVec {
        SparseVec::from_dense(e)
    }

    fn right_products(&self, lefts: &[&Vec<u32>], i: usize, k: usize, m: usize, field: &FieldCtx) -> Vec<Vec<(usize, Vec<u32>)>> {
        let consts = self.algebra.constants(i, k, m);
        let labels = self.algebra.labels(k, m);
        let mut present = vec![false; self.num_classes()];
        for &l in &labels {
            present[l] = true;
        }
        lefts
            .iter()
            .map(|u| {
                self.algebra
                    .multiply_by_factors(&consts, u, &labels, field)
                    .into_iter()
                    .enumerate()
                    .filter(|(j, _)| present[*j])
                    .collect()
            })
            .collect()
    }
}

/// Elements as explicit `|C_i| × |C_k|` matrices.
pub struct RawRoute<'a> {
    pub group: &'a GroupTable,
    pub classes: &'a ConjugacyData,
}

impl BlockRepresentation for RawRoute<'_> {
    type Elem = SparseMat;

    fn num_classes(&self) -> usize {
        self.classes.num_classes()
    }

    fn ambient_dim(&self, i: usize, k: usize) -> usize {
        self.classes.sizes[i] * self.classes.sizes[k]
    }

    fn factors(&self, i: usize, k: usize) -> Vec<(usize, SparseMat)> {
        (0..self.num_classes())
            .map(|j| (j, restrict_block(self.group, self.classes, i, j, k)))
            .filter(|(_, m)| !m.is_zero())
            .collect()
    }

    fn vectorize(&self, e: &SparseMat, i: usize, k: usize) -> SparseVec {
        vectorize(e, (self.classes.sizes[i], self.classes.sizes[k])).expect("block shape")
    }

    fn right_products(&self, lefts: &[&SparseMat], _i: usize, k: usize, m: usize, field: &FieldCtx) -> Vec<Vec<(usize, SparseMat)>> {
        let factors = self.factors(k, m);
        lefts
            .iter()
            .map(|u| factors.iter().map(|(j, f)| (*j, u.spmm(f, field).expect("chained blocks"))).collect())
            .collect()
    }
}

/// How a basis element was produced: a length-1 factor, or an earlier
/// element times a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// `(block index, element index)` of the left factor.
    pub parent: Option<(usize, usize)>,
    pub factor: (usize, usize, usize),
}

#[derive(Debug, Clone)]
pub struct BasisElement<E> {
    pub value: E,
    pub provenance: Provenance,
    pub level: usize,
}

/// A spanning set of `T_ℓ`, one rank tracker per ordered class pair.
#[derive(Debug, Clone)]
pub struct SwitchingBasis<E> {
    r: usize,
    field: FieldCtx,
    trackers: Vec<RankTracker>,
    elements: Vec<Vec<BasisElement<E>>>,
    frontier: Vec<std::ops::Range<usize>>,
    level: usize,
    history: Vec<Vec<Vec<usize>>>,
}

impl<E: Clone + Send + Sync> SwitchingBasis<E> {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn num_classes(&self) -> usize {
        self.r
    }

    pub fn total_dim(&self) -> usize {
        self.trackers.iter().map(RankTracker::rank).sum()
    }

    pub fn block_rank(&self, i: usize, k: usize) -> usize {
        self.trackers[i * self.r + k].rank()
    }

    pub fn tracker(&self, i: usize, k: usize) -> &RankTracker {
        &self.trackers[i * self.r + k]
    }

    pub fn elements(&self, i: usize, k: usize) -> &[BasisElement<E>] {
        &self.elements[i * self.r + k]
    }

    /// Block ranks now.
    pub fn block_dims(&self) -> Vec<Vec<usize>> {
        (0..self.r).map(|i| (0..self.r).map(|k| self.block_rank(i, k)).collect()).collect()
    }

    /// Block ranks after each completed level, starting with `T₀`.
    pub fn history(&self) -> &[Vec<Vec<usize>>] {
        &self.history
    }

    /// The chain of `(i, j, k)` factors whose product is this element.
    pub fn word(&self, block: usize, index: usize) -> Vec<(usize, usize, usize)> {
        let mut word = Vec::new();
        let mut cursor = Some((block, index));
        while let Some((b, e)) = cursor {
            let prov = self.elements[b][e].provenance;
            word.push(prov.factor);
            cursor = prov.parent;
        }
        word.reverse();
        word
    }
}

/// `T₀`: every nonzero length-1 factor, inserted into its block.
pub fn generate_t0<R: BlockRepresentation>(rep: &R, field: FieldCtx) -> Result<SwitchingBasis<R::Elem>, SwitchingError> {
    let r = rep.num_classes();
    let built: Vec<(RankTracker, Vec<BasisElement<R::Elem>>)> = (0..r * r)
        .into_par_iter()
        .map(|b| {
            let (i, k) = (b / r, b % r);
            let mut tracker = RankTracker::new(field, rep.ambient_dim(i, k));
            let mut elems = Vec::new();
            for (j, value) in rep.factors(i, k) {
                if tracker.insert(&rep.vectorize(&value, i, k))? {
                    elems.push(BasisElement { value, provenance: Provenance { parent: None, factor: (i, j, k) }, level: 0 });
                }
            }
            Ok((tracker, elems))
        })
        .collect::<Result<_, LaError>>()?;
    let (trackers, elements): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    let frontier = elements.iter().map(|e: &Vec<_>| 0..e.len()).collect();
    let mut basis = SwitchingBasis { r, field, trackers, elements, frontier, level: 0, history: Vec::new() };
    basis.history.push(basis.block_dims());
    info!("level 0: dim {}", basis.total_dim());
    Ok(basis)
}

fn check_bound(bounds: Option<&BlockTable>, i: usize, k: usize, rank: usize) -> Result<(), SwitchingError> {
    if let Some(b) = bounds {
        let bound = b.get(i, k);
        if rank > bound {
            return Err(SwitchingError::BoundExceeded { row: i, col: k, rank, bound });
        }
    }
    Ok(())
}

fn saturated(tracker: &RankTracker, bound: Option<usize>) -> bool {
    tracker.is_full() || bound.is_some_and(|b| tracker.rank() >= b)
}

/// `T_{ℓ+1} = T_ℓ + (elements new at level ℓ)·T₀`. Returns the growth of
/// each block.
pub fn extend_level<R: BlockRepresentation>(
    rep: &R,
    basis: &mut SwitchingBasis<R::Elem>,
    bounds: Option<&BlockTable>,
) -> Result<Vec<Vec<usize>>, SwitchingError> {
    let r = basis.r;
    let field = basis.field;
    let started = Instant::now();
    let next_level = basis.level + 1;
    let mut trackers = std::mem::take(&mut basis.trackers);
    let snapshot = &*basis;
    let additions: Vec<Vec<BasisElement<R::Elem>>> = trackers
        .par_iter_mut()
        .enumerate()
        .map(|(target, tracker)| {
            let (i, m) = (target / r, target % r);
            let bound = bounds.map(|b| b.get(i, m));
            let mut added = Vec::new();
            for k in 0..r {
                if saturated(tracker, bound) {
                    break;
                }
                let left_block = i * r + k;
                let range = snapshot.frontier[left_block].clone();
                if range.is_empty() {
                    continue;
                }
                let lefts: Vec<&R::Elem> = snapshot.elements[left_block][range.clone()].iter().map(|e| &e.value).collect();
                let products = rep.right_products(&lefts, i, k, m, &field);
                'lefts: for (offset, row) in products.into_iter().enumerate() {
                    for (j, value) in row {
                        if saturated(tracker, bound) {
                            break 'lefts;
                        }
                        if tracker.insert(&rep.vectorize(&value, i, m))? {
                            added.push(BasisElement {
                                value,
                                provenance: Provenance { parent: Some((left_block, range.start + offset)), factor: (k, j, m) },
                                level: next_level,
                            });
                        }
                    }
                }
            }
            check_bound(bounds, i, m, tracker.rank())?;
            if !added.is_empty() {
                debug!("level {next_level}: block ({i},{m}) rank {} (+{})", tracker.rank(), added.len());
            }
            Ok(added)
        })
        .collect::<Result<_, SwitchingError>>()?;
    basis.trackers = trackers;
    let mut growth = vec![vec![0usize; r]; r];
    for (b, added) in additions.into_iter().enumerate() {
        growth[b / r][b % r] = added.len();
        let start = basis.elements[b].len();
        basis.elements[b].extend(added);
        basis.frontier[b] = start..basis.elements[b].len();
    }
    basis.level = next_level;
    basis.history.push(basis.block_dims());
    info!(
        "level {next_level}: dim {} (+{}) in {:.2?}",
        basis.total_dim(),
        growth.iter().flatten().sum::<usize>(),
        started.elapsed()
    );
    Ok(growth)
}

/// The stationary basis together with the switching width `c`, the
/// smallest positive `ℓ` with `T_ℓ = T_{ℓ+1}`.
#[derive(Debug, Clone)]
pub struct ClosureRun<E> {
    pub basis: SwitchingBasis<E>,
    pub width: usize,
}

pub fn run_to_stationary<R: BlockRepresentation>(
    rep: &R,
    field: FieldCtx,
    max_width: usize,
    bounds: Option<&BlockTable>,
) -> Result<ClosureRun<R::Elem>, SwitchingError> {
    let mut basis = generate_t0(rep, field)?;
    let r = rep.num_classes();
    for i in 0..r {
        for k in 0..r {
            check_bound(bounds, i, k, basis.block_rank(i, k))?;
        }
    }
    loop {
        let growth = extend_level(rep, &mut basis, bounds)?;
        let level = basis.level;
        if growth.iter().flatten().all(|&g| g == 0) {
            return Ok(ClosureRun { width: (level - 1).max(1), basis });
        }
        if level > max_width {
            return Err(SwitchingError::WidthExceeded { max_width });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleRegularity {
    pub triply_regular: bool,
    pub triply_transitive: bool,
}

/// `T₀ = T`, and additionally `T₀ = End_G(V)` for conjugation.
pub fn triple_regularity(dim_t0: usize, dim_t: usize, conj_centralizer_dim: u64) -> TripleRegularity {
    TripleRegularity {
        triply_regular: dim_t0 == dim_t,
        triply_transitive: dim_t0 == dim_t && dim_t0 as u64 == conj_centralizer_dim,
    }
}

/// Pairs `(i, k)` joined by a chain of nonzero intersection triples, which
/// bounds where any switching product can be supported.
pub fn reachable_blocks(tensor: &crate::scheme::IntersectionTensor) -> Vec<Vec<bool>> {
    let r = tensor.num_relations();
    let mut reach = vec![vec![false; r]; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if tensor.get(i, j, k) > 0 {
                    reach[i][k] = true;
                }
            }
        }
    }
    for mid in 0..r {
        for a in 0..r {
            if reach[a][mid] {
                for b in 0..r {
                    if reach[mid][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugacy_classes, DEFAULT_MAX_ORDER};
    use crate::orbitals::{H1Action, Orbitals, DEFAULT_PAIR_BUDGET};
    use crate::scheme::{build_scheme, intersection_numbers};

    struct Setup {
        group: GroupTable,
        classes: ConjugacyData,
        orbitals: Orbitals,
    }

    fn setup(n: u32) -> Setup {
        let group = GroupTable::symmetric(n, DEFAULT_MAX_ORDER).unwrap();
        let classes = conjugacy_classes(&group);
        let action = H1Action::new(&group, &classes);
        let orbitals = Orbitals::compute(&group, &classes, &action, DEFAULT_PAIR_BUDGET).unwrap();
        Setup { group, classes, orbitals }
    }

    fn field() -> FieldCtx {
        FieldCtx::new(2_147_483_629).unwrap()
    }

    #[test]
    fn raw_and_orbital_routes_agree_level_by_level() {
        for n in 3..=5 {
            let s = setup(n);
            let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
            let orbital = run_to_stationary(&OrbitalRoute { algebra: &alg }, field(), 6, None).unwrap();
            let raw = run_to_stationary(&RawRoute { group: &s.group, classes: &s.classes }, field(), 6, None).unwrap();
            assert_eq!(orbital.basis.history(), raw.basis.history(), "S{n}");
            assert_eq!(orbital.width, raw.width);
        }
    }

    #[test]
    fn t0_counts_nonzero_intersection_numbers() {
        for n in 3..=5 {
            let s = setup(n);
            let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
            let t0 = generate_t0(&OrbitalRoute { algebra: &alg }, field()).unwrap();
            let tensor = intersection_numbers(&build_scheme(s.group.clone()));
            assert_eq!(t0.total_dim(), tensor.dim_t0());
        }
    }

    #[test]
    fn s4_closure() {
        let s = setup(4);
        let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
        let run = run_to_stationary(&OrbitalRoute { algebra: &alg }, field(), 6, None).unwrap();
        assert_eq!(run.basis.history()[0].iter().flatten().sum::<usize>(), 42);
        assert_eq!(run.basis.total_dim(), 43);
        assert_eq!(run.width, 1);
        let tr = triple_regularity(42, 43, 43);
        assert!(!tr.triply_regular && !tr.triply_transitive);
    }

    #[test]
    fn words_multiply_back_to_elements() {
        let s = setup(4);
        let raw = RawRoute { group: &s.group, classes: &s.classes };
        let f = field();
        let run = run_to_stationary(&raw, f, 6, None).unwrap();
        let r = s.classes.num_classes();
        for b in 0..r * r {
            for (e, elem) in run.basis.elements[b].iter().enumerate() {
                let word = run.basis.word(b, e);
                assert_eq!(word.len(), elem.level + 1);
                for w in word.windows(2) {
                    assert_eq!(w[0].2, w[1].0);
                }
                let mut product = restrict_block(&s.group, &s.classes, word[0].0, word[0].1, word[0].2);
                for &(i, j, k) in &word[1..] {
                    product = product.spmm(&restrict_block(&s.group, &s.classes, i, j, k), &f).unwrap();
                }
                assert_eq!(product, elem.value);
            }
        }
    }

    #[test]
    fn monotone_history_within_reachable_support() {
        let s = setup(5);
        let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
        let route = OrbitalRoute { algebra: &alg };
        let mut basis = generate_t0(&route, field()).unwrap();
        for _ in 0..3 {
            extend_level(&route, &mut basis, None).unwrap();
        }
        let h = basis.history();
        for w in h.windows(2) {
            for (a, b) in w[0].iter().flatten().zip(w[1].iter().flatten()) {
                assert!(a <= b);
            }
        }
        assert_eq!(h[2], h[3]);
        let tensor = intersection_numbers(&build_scheme(s.group.clone()));
        let reach = reachable_blocks(&tensor);
        for (i, row) in h.last().unwrap().iter().enumerate() {
            for (k, &d) in row.iter().enumerate() {
                assert!(d == 0 || reach[i][k]);
            }
        }
    }

    #[test]
    fn bounds_prune_and_reject() {
        let s = setup(4);
        let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
        let route = OrbitalRoute { algebra: &alg };
        let bounds = s.orbitals.table(s.classes.label_strings());
        let run = run_to_stationary(&route, field(), 6, Some(&bounds)).unwrap();
        assert_eq!(run.basis.total_dim(), 43);
        let mut tight = bounds.dims().clone();
        tight[1][1] = 1;
        let tight = BlockTable::new(bounds.labels().to_vec(), tight);
        let err = run_to_stationary(&route, field(), 6, Some(&tight)).unwrap_err();
        assert!(matches!(err, SwitchingError::BoundExceeded { row: 1, col: 1, .. }));
    }

    #[test]
    fn width_limit_is_enforced() {
        let s = setup(4);
        let alg = OrbitalAlgebra::new(&s.group, &s.classes, &s.orbitals);
        let err = run_to_stationary(&OrbitalRoute { algebra: &alg }, field(), 0, None).unwrap_err();
        assert_eq!(err, SwitchingError::WidthExceeded { max_width: 0 });
    }
}
