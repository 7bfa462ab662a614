//! Centrally primitive idempotents of the centralizer algebra, their
//! membership in the closure `T`, thinness of irreducible modules and the
//! simple components of `T`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::centralizer::{OrbitalAlgebra, TripleConstants};
use crate::chars::{CharTable, MultiplicityVector, Sign, SignedPartition};
use crate::exactla::{FieldCtx, LaError, RankTracker, SparseVec};
use crate::switching::SwitchingBasis;

#[derive(Debug, thiserror::Error)]
pub enum WedderburnError {
    #[error("{0} has multiplicity zero; its idempotent vanishes")]
    ZeroIdempotent(SignedPartition),
    #[error("dim E W for {label} at class {class} is {numerator}/{denominator}, not an integer")]
    InexactDimension { label: SignedPartition, class: usize, numerator: i128, denominator: i128 },
    #[error("block dims of {label} sum to {sum}, expected multiplicity {expected}")]
    DimensionSum { label: SignedPartition, sum: u64, expected: u64 },
    #[error("prime {p} divides the idempotent denominator")]
    BadPrime { p: u64 },
    #[error("{label} qualifies as a large component but its idempotent is not in T")]
    LargeNonMember { label: SignedPartition },
    #[error("non-member idempotents {0:?} cannot be grouped into sums lying in T")]
    Unpartitioned(Vec<String>),
    #[error("sum over {labels:?} spans an ideal of dimension {dim}, not a square")]
    NonSquare { labels: Vec<String>, dim: usize },
    #[error("merged members {labels:?} disagree on class dims")]
    MergedMismatch { labels: Vec<String> },
    #[error("components square-sum to {found}, expected dim T = {expected}")]
    Reconciliation { found: u64, expected: u64 },
    #[error(transparent)]
    Linear(#[from] LaError),
}

/// For each diagonal orbital `(x, y)` with `x, y ∈ C_μ`, how many `g` of each
/// class satisfy `g x g⁻¹ = y` and `g x⁻¹ g⁻¹ = y`.
pub struct CpiContext<'a> {
    pub algebra: &'a OrbitalAlgebra<'a>,
    pub table: &'a CharTable,
    counts: Vec<Vec<Vec<(u32, u32)>>>,
    diagonal: Vec<usize>,
    cover: u64,
}

impl<'a> CpiContext<'a> {
    pub fn new(algebra: &'a OrbitalAlgebra<'a>, table: &'a CharTable) -> Self {
        let group = algebra.group;
        let classes = algebra.classes;
        let r = classes.num_classes();
        let counts = (0..r)
            .into_par_iter()
            .map(|mu| {
                algebra
                    .orbitals
                    .block_info(mu, mu)
                    .iter()
                    .map(|info| {
                        let (x, y) = (info.rep.0 as usize, info.rep.1 as usize);
                        let xi = group.inv(x);
                        let mut per_class = vec![(0u32, 0u32); r];
                        for g in 0..group.order() {
                            let cls = classes.class_of(g);
                            if group.conj(g, x) == y {
                                per_class[cls].0 += 1;
                            }
                            if group.conj(g, xi) == y {
                                per_class[cls].1 += 1;
                            }
                        }
                        per_class
                    })
                    .collect()
            })
            .collect();
        let diagonal = (0..r)
            .map(|mu| algebra.orbitals.block_info(mu, mu).iter().position(|o| o.label == 0).expect("diagonal orbital"))
            .collect();
        Self { algebra, table, counts, diagonal, cover: 2 * group.order() as u64 }
    }

    /// `Σ_{h ∈ H₁, h(x) = y} χ^{λ±}(h)` at the representative of an orbital.
    fn character_sum(&self, sp: &SignedPartition, mu: usize, local: usize) -> i128 {
        let l = self.table.index_of(&sp.base).expect("partition of n");
        self.counts[mu][local]
            .iter()
            .enumerate()
            .map(|(cls, &(plus, minus))| self.table.values[l][cls] * (plus as i128 + sp.sign.value() * minus as i128))
            .sum()
    }

    /// `dim E_μ W` for the irreducible centralizer module of `sp`, exactly:
    /// `|C_μ|·(character sum on the diagonal) / |H₁|`.
    pub fn block_dims(&self, sp: &SignedPartition) -> Result<Vec<u64>, WedderburnError> {
        let classes = self.algebra.classes;
        (0..classes.num_classes())
            .map(|mu| {
                let num = classes.sizes[mu] as i128 * self.character_sum(sp, mu, self.diagonal[mu]);
                let den = self.cover as i128;
                if num % den != 0 || num < 0 {
                    return Err(WedderburnError::InexactDimension { label: sp.clone(), class: mu, numerator: num, denominator: den });
                }
                Ok((num / den) as u64)
            })
            .collect()
    }

    /// The idempotent `(f/|H₁|)·Σ_h χ(h) M_h` on each diagonal block.
    pub fn build_cpi(&self, sp: &SignedPartition, multiplicity: u64, field: &FieldCtx) -> Result<CPIdem, WedderburnError> {
        if multiplicity == 0 {
            return Err(WedderburnError::ZeroIdempotent(sp.clone()));
        }
        let l = self.table.index_of(&sp.base).expect("partition of n");
        let degree = self.table.degree(l);
        let r = self.algebra.num_classes();
        let blocks = (0..r)
            .map(|mu| {
                (0..self.counts[mu].len())
                    .map(|c| {
                        field
                            .ratio(degree * self.character_sum(sp, mu, c), self.cover as i128)
                            .ok_or(WedderburnError::BadPrime { p: field.prime() })
                    })
                    .collect::<Result<Vec<u32>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CPIdem { label: sp.clone(), degree: degree as u64, multiplicity, blocks, prime: field.prime() })
    }

    pub fn diagonal_orbital(&self, mu: usize) -> usize {
        self.diagonal[mu]
    }
}

/// A centrally primitive idempotent of the centralizer algebra, stored as one
/// orbital-coordinate vector per diagonal block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPIdem {
    pub label: SignedPartition,
    pub degree: u64,
    pub multiplicity: u64,
    pub blocks: Vec<Vec<u32>>,
    pub prime: u64,
}

impl CPIdem {
    /// Trace mod p, which for an idempotent is its rank mod p.
    pub fn trace(&self, ctx: &CpiContext<'_>, field: &FieldCtx) -> u32 {
        let classes = ctx.algebra.classes;
        (0..self.blocks.len()).fold(0, |acc, mu| {
            let diag = self.blocks[mu][ctx.diagonal_orbital(mu)];
            field.add(acc, field.mul(field.from_u64(classes.sizes[mu] as u64), diag))
        })
    }

    pub fn add(&self, other: &Self, field: &FieldCtx) -> Vec<Vec<u32>> {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect())
            .collect()
    }
}

/// Cached structure constants for products among diagonal blocks and with
/// length-1 factors.
pub struct IdempotentChecks<'a> {
    algebra: &'a OrbitalAlgebra<'a>,
    diag: Vec<TripleConstants>,
}

impl<'a> IdempotentChecks<'a> {
    pub fn new(algebra: &'a OrbitalAlgebra<'a>) -> Self {
        let r = algebra.num_classes();
        let diag = (0..r).into_par_iter().map(|mu| algebra.constants(mu, mu, mu)).collect();
        Self { algebra, diag }
    }

    pub fn product(&self, a: &[Vec<u32>], b: &[Vec<u32>], field: &FieldCtx) -> Vec<Vec<u32>> {
        (0..a.len()).map(|mu| self.algebra.multiply(&self.diag[mu], &a[mu], &b[mu], field)).collect()
    }

    pub fn is_idempotent(&self, e: &CPIdem, field: &FieldCtx) -> bool {
        self.product(&e.blocks, &e.blocks, field) == e.blocks
    }

    pub fn orthogonal(&self, a: &CPIdem, b: &CPIdem, field: &FieldCtx) -> bool {
        self.product(&a.blocks, &b.blocks, field).iter().flatten().all(|&v| v == 0)
    }

    /// `Σ e = 1`, with the identity being the diagonal orbital of each block.
    pub fn sums_to_identity(&self, es: &[CPIdem], ctx: &CpiContext<'_>, field: &FieldCtx) -> bool {
        let r = self.algebra.num_classes();
        (0..r).all(|mu| {
            let len = self.algebra.block_dim(mu, mu);
            let mut sum = vec![0u32; len];
            for e in es {
                for (s, &v) in sum.iter_mut().zip(&e.blocks[mu]) {
                    *s = field.add(*s, v);
                }
            }
            sum.iter().enumerate().all(|(c, &v)| v == u32::from(c == ctx.diagonal_orbital(mu)))
        })
    }

    /// For each idempotent, whether `e·F = F·e` for every nonzero length-1
    /// factor `F = E_i A_j E_k`.
    pub fn commutes_with_factors(&self, es: &[CPIdem], field: &FieldCtx) -> Vec<bool> {
        let alg = self.algebra;
        let r = alg.num_classes();
        let per_block: Vec<Vec<bool>> = (0..r * r)
            .into_par_iter()
            .map(|b| {
                let (i, k) = (b / r, b % r);
                let factors: Vec<Vec<u32>> = (0..r).filter_map(|j| alg.factor(i, j, k)).collect();
                if factors.is_empty() {
                    return vec![true; es.len()];
                }
                let left = alg.constants(i, i, k);
                let right = alg.constants(i, k, k);
                es.iter()
                    .map(|e| {
                        factors.iter().all(|f| {
                            alg.multiply(&left, &e.blocks[i], f, field) == alg.multiply(&right, f, &e.blocks[k], field)
                        })
                    })
                    .collect()
            })
            .collect();
        (0..es.len()).map(|x| per_block.iter().all(|b| b[x])).collect()
    }
}

/// True iff every diagonal block of `blocks` lies in the span of `T`'s
/// basis for that block.
pub fn cpi_membership(blocks: &[Vec<u32>], basis: &SwitchingBasis<Vec<u32>>) -> Result<bool, LaError> {
    for (mu, block) in blocks.iter().enumerate() {
        if !basis.tracker(mu, mu).contains(&SparseVec::from_dense(block))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `dim(T·e)` for `e` supported on diagonal blocks.
pub fn ideal_dim(blocks: &[Vec<u32>], basis: &SwitchingBasis<Vec<u32>>, algebra: &OrbitalAlgebra<'_>) -> Result<usize, LaError> {
    let r = algebra.num_classes();
    let field = *basis.field();
    let ranks: Vec<usize> = (0..r * r)
        .into_par_iter()
        .map(|b| {
            let (i, k) = (b / r, b % r);
            let tracker = basis.tracker(i, k);
            if tracker.rank() == 0 || blocks[k].iter().all(|&v| v == 0) {
                return Ok(0);
            }
            let consts = algebra.constants(i, k, k);
            let mut out = RankTracker::new(field, algebra.block_dim(i, k));
            for row in tracker.basis() {
                let prod = algebra.multiply(&consts, &row.to_dense(), &blocks[k], &field);
                out.insert(&SparseVec::from_dense(&prod))?;
            }
            Ok(out.rank())
        })
        .collect::<Result<_, LaError>>()?;
    Ok(ranks.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentSource {
    /// Multiplicity large enough that the component cannot shrink.
    Large,
    /// Idempotent lies in `T` and `T·e` is the whole block.
    Member,
    /// Minimal sum of non-member idempotents lying in `T`.
    Merged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub labels: Vec<SignedPartition>,
    pub size: u64,
    #[serde(skip)]
    pub source: ComponentSource,
}

/// A member idempotent whose ideal in `T` is smaller than `m²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub label: SignedPartition,
    pub ideal_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedderburnReport {
    pub components: Vec<Component>,
    pub splits: Vec<Split>,
    pub non_members: Vec<SignedPartition>,
    pub total: u64,
}

impl WedderburnReport {
    pub fn sizes(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.size).collect()
    }

    /// `M_11(C) ⊕ M_8(C) ⊕ … ⊕ C`.
    pub fn display_sum(&self) -> String {
        self.components
            .iter()
            .map(|c| if c.size == 1 { "C".to_string() } else { format!("M_{}(C)", c.size) })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.components
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "labels": c.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                        "size": c.size,
                    })
                })
                .collect(),
        )
    }
}

fn isqrt(v: usize) -> Option<u64> {
    let s = (v as f64).sqrt().round() as u64;
    (s * s == v as u64).then_some(s)
}

/// Simple components of `T` derived from the centralizer algebra's
/// idempotents. `idempotents` must hold one entry per nonzero multiplicity.
pub fn decompose_t(
    idempotents: &[CPIdem],
    basis: &SwitchingBasis<Vec<u32>>,
    algebra: &OrbitalAlgebra<'_>,
    dim_tilde: u64,
) -> Result<WedderburnReport, WedderburnError> {
    let field = *basis.field();
    let dim_t = basis.total_dim() as u64;
    let gap = dim_tilde.saturating_sub(dim_t);
    let mut components = Vec::new();
    let mut splits = Vec::new();
    let mut non_members: Vec<&CPIdem> = Vec::new();
    for e in idempotents {
        let m = e.multiplicity;
        let member = cpi_membership(&e.blocks, basis)?;
        if 2 * m - 1 > gap {
            if !member {
                return Err(WedderburnError::LargeNonMember { label: e.label.clone() });
            }
            components.push(Component { labels: vec![e.label.clone()], size: m, source: ComponentSource::Large });
        } else if member {
            let dim = ideal_dim(&e.blocks, basis, algebra)?;
            if dim as u64 == m * m {
                components.push(Component { labels: vec![e.label.clone()], size: m, source: ComponentSource::Member });
            } else {
                splits.push(Split { label: e.label.clone(), ideal_dim: dim });
            }
        } else {
            non_members.push(e);
        }
    }

    let mut covered = vec![false; non_members.len()];
    for size in 2..=non_members.len() {
        for subset in subsets(non_members.len(), size) {
            if subset.iter().any(|&i| covered[i]) {
                continue;
            }
            let mut sum = non_members[subset[0]].blocks.clone();
            for &i in &subset[1..] {
                for (acc, b) in sum.iter_mut().zip(&non_members[i].blocks) {
                    for (x, &y) in acc.iter_mut().zip(b) {
                        *x = field.add(*x, y);
                    }
                }
            }
            if !cpi_membership(&sum, basis)? {
                continue;
            }
            let labels: Vec<SignedPartition> = subset.iter().map(|&i| non_members[i].label.clone()).collect();
            let dim = ideal_dim(&sum, basis, algebra)?;
            let size = isqrt(dim).ok_or_else(|| WedderburnError::NonSquare {
                labels: labels.iter().map(|l| l.to_string()).collect(),
                dim,
            })?;
            for &i in &subset {
                covered[i] = true;
            }
            components.push(Component { labels, size, source: ComponentSource::Merged });
        }
    }
    if covered.iter().any(|&c| !c) {
        let left = non_members.iter().zip(&covered).filter(|(_, &c)| !c).map(|(e, _)| e.label.to_string()).collect();
        return Err(WedderburnError::Unpartitioned(left));
    }

    components.sort_by(|a, b| a.labels[0].cmp(&b.labels[0]));
    let total: u64 = components.iter().map(|c| c.size * c.size).sum::<u64>()
        + splits.iter().map(|s| s.ideal_dim as u64).sum::<u64>();
    if total != dim_t {
        return Err(WedderburnError::Reconciliation { found: total, expected: dim_t });
    }
    Ok(WedderburnReport {
        components,
        splits,
        non_members: non_members.iter().map(|e| e.label.clone()).collect(),
        total,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleThinness {
    pub labels: Vec<SignedPartition>,
    pub dim: u64,
    pub block_dims: Vec<u64>,
    pub thin: bool,
}

/// Thinness of the irreducible centralizer modules and of the irreducible
/// `T`-modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThinReport {
    pub centralizer_modules: Vec<ModuleThinness>,
    pub t_modules: Vec<ModuleThinness>,
}

/// Exact `dim E_μ W` for every nonzero signed character.
pub fn module_block_dims(ctx: &CpiContext<'_>, mults: &MultiplicityVector) -> Result<BTreeMap<SignedPartition, Vec<u64>>, WedderburnError> {
    let mut out = BTreeMap::new();
    for (sp, m) in mults.nonzero() {
        let dims = ctx.block_dims(sp)?;
        let sum: u64 = dims.iter().sum();
        if sum != m {
            return Err(WedderburnError::DimensionSum { label: sp.clone(), sum, expected: m });
        }
        out.insert(sp.clone(), dims);
    }
    Ok(out)
}

pub fn thinness(block_dims: &BTreeMap<SignedPartition, Vec<u64>>, report: &WedderburnReport) -> Result<ThinReport, WedderburnError> {
    let describe = |labels: Vec<SignedPartition>, dims: &Vec<u64>| {
        let dim = dims.iter().sum();
        let thin = dims.iter().all(|&d| d <= 1);
        debug_assert!(!(thin && dim > dims.len() as u64));
        ModuleThinness { labels, dim, block_dims: dims.clone(), thin }
    };
    let centralizer_modules = block_dims.iter().map(|(sp, d)| describe(vec![sp.clone()], d)).collect();
    let mut t_modules = Vec::new();
    for c in &report.components {
        let first = &block_dims[&c.labels[0]];
        if c.labels.iter().any(|l| &block_dims[l] != first) {
            return Err(WedderburnError::MergedMismatch { labels: c.labels.iter().map(|l| l.to_string()).collect() });
        }
        t_modules.push(describe(c.labels.clone(), first));
    }
    Ok(ThinReport { centralizer_modules, t_modules })
}

/// Convenience for labels like `[4,1^3]+`.
pub fn signed(base: &str, sign: Sign) -> SignedPartition {
    SignedPartition::new(base.parse().expect("partition"), sign)
}
