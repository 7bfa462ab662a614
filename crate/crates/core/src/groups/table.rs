use std::collections::VecDeque;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GroupError, Permutation};

/// Largest group order accepted by default. The multiplication table is
/// materialized, so memory grows with the square of the order.
pub const DEFAULT_MAX_ORDER: usize = 10_080;

/// How a group is obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupDescriptor {
    Symmetric(u32),
    CayleyTable(PathBuf),
}

impl std::str::FromStr for GroupDescriptor {
    type Err = GroupError;

    /// Parses `sym:N` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(n) = s.strip_prefix("sym:") {
            let n = n
                .parse()
                .map_err(|_| GroupError::Descriptor(format!("bad degree in `{s}`")))?;
            Ok(Self::Symmetric(n))
        } else if let Some(path) = s.strip_prefix("file:") {
            Ok(Self::CayleyTable(PathBuf::from(path)))
        } else {
            Err(GroupError::Descriptor(format!("expected sym:N or file:PATH, got `{s}`")))
        }
    }
}

impl std::fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Symmetric(n) => write!(f, "sym:{n}"),
            Self::CayleyTable(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone)]
enum GroupKind {
    Symmetric { degree: u32, perms: Vec<Permutation> },
    Table,
}

/// A finite group given by its full multiplication table.
///
/// Element 0 is the identity. For symmetric groups element `r` is the
/// permutation of lexicographic rank `r`, and `x·y` applies `y` first.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
    kind: GroupKind,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// A generating set (empty for the trivial group).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Degree `n` when this is `S_n`.
    pub fn symmetric_degree(&self) -> Option<u32> {
        match &self.kind {
            GroupKind::Symmetric { degree, .. } => Some(*degree),
            GroupKind::Table => None,
        }
    }

    /// The permutation behind element `x` when this is a symmetric group.
    pub fn permutation(&self, x: usize) -> Option<&Permutation> {
        match &self.kind {
            GroupKind::Symmetric { perms, .. } => perms.get(x),
            GroupKind::Table => None,
        }
    }

    /// `S_n` with elements in lexicographic rank order.
    pub fn symmetric(n: u32, max_order: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Descriptor("symmetric group of degree 0".into()));
        }
        let order = super::factorial(n);
        if order > max_order as u128 || order > u16::MAX as u128 + 1 {
            return Err(GroupError::TooLarge { order, max: max_order });
        }
        let order = order as usize;
        let degree = n as usize;
        let perms: Vec<Permutation> = (0..order).map(|r| Permutation::unrank(degree, r)).collect();
        let mut mul = vec![0u16; order * order];
        mul.par_chunks_mut(order).enumerate().for_each(|(x, row)| {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = perms[x].compose(&perms[y]).rank() as u16;
            }
        });
        let inv = perms.iter().map(|p| p.inverse().rank() as u16).collect();
        let mut generators = Vec::new();
        if degree >= 2 {
            generators.push(Permutation::from_cycles(degree, &[&[0, 1]])?.rank());
        }
        if degree >= 3 {
            let cycle: Vec<u8> = (0..n as u8).collect();
            generators.push(Permutation::from_cycles(degree, &[&cycle])?.rank());
        }
        Ok(Self { order, mul, inv, generators, kind: GroupKind::Symmetric { degree: n, perms } })
    }

    /// Parses a Cayley table file: a first line `order N`, then `N` rows of
    /// `N` whitespace-separated 0-based indices (row `x`, column `y` holds
    /// `x·y`). Element 0 must be the identity.
    pub fn from_cayley_str(text: &str, max_order: usize) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = lines
            .next()
            .ok_or_else(|| GroupError::parse(1, "empty table file"))?;
        let order: usize = header
            .strip_prefix("order")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GroupError::parse(header_line, "expected `order N`"))?;
        if order == 0 {
            return Err(GroupError::parse(header_line, "order must be positive"));
        }
        if order > max_order || order > u16::MAX as usize + 1 {
            return Err(GroupError::TooLarge { order: order as u128, max: max_order });
        }
        let mut mul = Vec::with_capacity(order * order);
        let mut row_lines = Vec::with_capacity(order);
        for row in 0..order {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| GroupError::parse(header_line, format!("missing row {row}")))?;
            let mut seen = vec![false; order];
            let mut count = 0;
            for token in line.split_whitespace() {
                let value: usize = token
                    .parse()
                    .map_err(|_| GroupError::parse(line_no, format!("bad entry `{token}`")))?;
                if value >= order {
                    return Err(GroupError::parse(line_no, format!("entry {value} out of range")));
                }
                if seen[value] {
                    return Err(GroupError::parse(line_no, format!("row repeats {value}")));
                }
                seen[value] = true;
                mul.push(value as u16);
                count += 1;
            }
            if count != order {
                return Err(GroupError::parse(line_no, format!("expected {order} entries, found {count}")));
            }
            row_lines.push(line_no);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(GroupError::parse(line_no, "trailing data after table"));
        }
        for y in 0..order {
            let mut seen = vec![false; order];
            for x in 0..order {
                let v = mul[x * order + y] as usize;
                if seen[v] {
                    return Err(GroupError::parse(row_lines[x], format!("column {y} repeats {v}")));
                }
                seen[v] = true;
            }
        }
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(GroupError::MissingIdentity { line: row_lines[x] });
            }
        }
        let mut inv = vec![0u16; order];
        for x in 0..order {
            let y = (0..order).find(|&y| mul[x * order + y] == 0).expect("latin rows contain 0");
            inv[x] = y as u16;
        }
        let mut group = Self { order, mul, inv, generators: Vec::new(), kind: GroupKind::Table };
        group.check_associative(0x5eed)?;
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Checks associativity on every triple for small groups, otherwise on a
    /// seeded sample of triples.
    pub fn check_associative(&self, seed: u64) -> Result<(), GroupError> {
        let n = self.order;
        let check = |x: usize, y: usize, z: usize| {
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                Err(GroupError::NotAssociative { x, y, z })
            } else {
                Ok(())
            }
        };
        if n <= 64 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20_000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut in_subgroup = vec![false; self.order];
        in_subgroup[0] = true;
        for x in 1..self.order {
            if in_subgroup[x] {
                continue;
            }
            gens.push(x);
            in_subgroup.iter_mut().for_each(|b| *b = false);
            in_subgroup[0] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.mul(y, g);
                    if !in_subgroup[z] {
                        in_subgroup[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        gens
    }

    /// The permutation `x ↦ g x g⁻¹` as an index array.
    pub fn conjugation_map(&self, g: usize) -> Vec<u32> {
        (0..self.order).map(|x| self.conj(g, x) as u32).collect()
    }

    /// The permutation `x ↦ x⁻¹` as an index array.
    pub fn inversion_map(&self) -> Vec<u32> {
        self.inv.iter().map(|&y| y as u32).collect()
    }
}

/// Builds a group from its descriptor with the default order limit.
pub fn build_group(desc: &GroupDescriptor) -> Result<GroupTable, GroupError> {
    build_group_with_limit(desc, DEFAULT_MAX_ORDER)
}

pub fn build_group_with_limit(desc: &GroupDescriptor, max_order: usize) -> Result<GroupTable, GroupError> {
    match desc {
        GroupDescriptor::Symmetric(n) => GroupTable::symmetric(*n, max_order),
        GroupDescriptor::CayleyTable(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
            GroupTable::from_cayley_str(&text, max_order)
        }
    }
}
