//! Characters of `S_n` and of `S_n × C2`, and the permutation character of
//! the identity stabilizer acting on the group.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::groups::{class_size, factorial, inversion_closed, partitions_of, ConjugacyData, GroupError, GroupTable, Partition};
use crate::orbitals::inverted_fixed_points;

#[derive(Debug, thiserror::Error)]
pub enum CharError {
    #[error("partitions of different sizes: {0} and {1}")]
    SizeMismatch(u32, u32),
    #[error("orthogonality fails for rows {0} and {1}")]
    Orthogonality(String, String),
    #[error("{what} is not an integer: {numerator}/{denominator}")]
    NonIntegral { what: String, numerator: i128, denominator: i128 },
    #[error("group classes are not closed under inversion")]
    NotInversionClosed,
    #[error("group is not a symmetric group")]
    NotSymmetric,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `n! / ∏ hook lengths`.
pub fn hook_length_dim(lambda: &Partition) -> u128 {
    let parts = lambda.parts();
    let conj = lambda.conjugate();
    let cols = conj.parts();
    let mut hooks: u128 = 1;
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = cols[j] as usize - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    factorial(lambda.n()) / hooks
}

/// Beta numbers `λ_i + ℓ - i` of `λ` with `ℓ` parts.
fn beta_set(parts: &[u32]) -> Vec<u32> {
    let l = parts.len() as u32;
    parts.iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect()
}

fn normalise(mut beta: Vec<u32>) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    while beta.last() == Some(&0) {
        beta.pop();
        for b in beta.iter_mut() {
            *b -= 1;
        }
    }
    beta
}

struct MnEvaluator<'a> {
    cycles: &'a [u32],
    memo: HashMap<(Vec<u32>, usize), i128>,
}

impl MnEvaluator<'_> {
    /// Removes border strips of lengths `cycles[step..]` from the shape with
    /// the given beta set.
    fn eval(&mut self, beta: Vec<u32>, step: usize) -> i128 {
        if step == self.cycles.len() {
            return i128::from(beta.is_empty());
        }
        let key = (beta, step);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (beta, _) = &key;
        let t = self.cycles[step];
        let mut total: i128 = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < t || beta.contains(&(b - t)) {
                continue;
            }
            let target = b - t;
            let between = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut next = beta.clone();
            next[idx] = target;
            let value = self.eval(normalise(next), step + 1);
            total += if between % 2 == 0 { value } else { -value };
        }
        self.memo.insert(key, total);
        total
    }
}

/// `χ^λ` at cycle type `μ` by border-strip removal.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i128, CharError> {
    if lambda.n() != mu.n() {
        return Err(CharError::SizeMismatch(lambda.n(), mu.n()));
    }
    let mut eval = MnEvaluator { cycles: mu.parts(), memo: HashMap::new() };
    Ok(eval.eval(normalise(beta_set(lambda.parts())), 0))
}

/// Character table of `S_n`; rows and columns follow ascending partition
/// order, matching the class order of [`crate::groups::conjugacy_classes`].
#[derive(Debug, Clone, Serialize)]
pub struct CharTable {
    pub n: u32,
    pub partitions: Vec<Partition>,
    /// `values[λ][μ] = χ^λ(μ)`.
    pub values: Vec<Vec<i128>>,
}

impl CharTable {
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Option<i128> {
        Some(self.values[self.index_of(lambda)?][self.index_of(mu)?])
    }

    pub fn degree(&self, lambda: usize) -> i128 {
        self.values[lambda][0]
    }

    pub fn class_sizes(&self) -> Vec<u128> {
        self.partitions.iter().map(class_size).collect()
    }

    /// Markdown with rows in descending and columns in ascending order.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("| S{} |", self.n);
        for p in &self.partitions {
            out.push_str(&format!(" {p} |"));
        }
        out.push('\n');
        out.push_str(&"|---".repeat(self.partitions.len() + 1));
        out.push_str("|\n");
        for (i, p) in self.partitions.iter().enumerate().rev() {
            out.push_str(&format!("| {p} |"));
            for v in &self.values[i] {
                out.push_str(&format!(" {v} |"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn char_table(n: u32) -> Result<CharTable, CharError> {
    let partitions = partitions_of(n)?;
    let mut columns: Vec<Vec<i128>> = Vec::with_capacity(partitions.len());
    for mu in &partitions {
        let mut eval = MnEvaluator { cycles: mu.parts(), memo: HashMap::new() };
        columns.push(partitions.iter().map(|l| eval.eval(normalise(beta_set(l.parts())), 0)).collect());
    }
    let values: Vec<Vec<i128>> =
        (0..partitions.len()).map(|l| columns.iter().map(|col| col[l]).collect()).collect();
    let table = CharTable { n, partitions, values };
    let sizes = table.class_sizes();
    let order = factorial(n) as i128;
    for a in 0..table.partitions.len() {
        for b in 0..=a {
            let ip: i128 = (0..sizes.len()).map(|m| sizes[m] as i128 * table.values[a][m] * table.values[b][m]).sum();
            if ip != if a == b { order } else { 0 } {
                return Err(CharError::Orthogonality(table.partitions[a].to_string(), table.partitions[b].to_string()));
            }
        }
    }
    Ok(table)
}

/// Row sums `Σ_μ χ^λ(μ)`, in table order.
pub fn row_sums(table: &CharTable) -> Vec<i128> {
    table.values.iter().map(|row| row.iter().sum()).collect()
}

/// Eigenmatrix of the class scheme: `P[λ][μ] = χ^λ(μ)·|C_μ| / f^λ`, with the
/// multiplicities `(f^λ)²`.
#[derive(Debug, Clone, Serialize)]
pub struct Eigenmatrix {
    pub values: Vec<Vec<i128>>,
    pub multiplicities: Vec<u128>,
}

pub fn scheme_eigenmatrix(table: &CharTable) -> Result<Eigenmatrix, CharError> {
    let sizes = table.class_sizes();
    let mut values = Vec::with_capacity(table.partitions.len());
    let mut multiplicities = Vec::with_capacity(table.partitions.len());
    for (l, row) in table.values.iter().enumerate() {
        let f = table.degree(l);
        multiplicities.push((f * f) as u128);
        let mut out = Vec::with_capacity(row.len());
        for (m, &chi) in row.iter().enumerate() {
            let num = chi * sizes[m] as i128;
            if num % f != 0 {
                return Err(CharError::NonIntegral { what: format!("eigenvalue ({l},{m})"), numerator: num, denominator: f });
            }
            out.push(num / f);
        }
        values.push(out);
    }
    Ok(Eigenmatrix { values, multiplicities })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// An irreducible character of `S_n × C2`: `χ^λ` tensored with the trivial
/// (`+`) or sign (`−`) character of `C2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPartition {
    pub base: Partition,
    pub sign: Sign,
}

impl SignedPartition {
    pub fn new(base: Partition, sign: Sign) -> Self {
        Self { base, sign }
    }
}

/// Descending base partition, then `+` before `−`.
impl Ord for SignedPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.base.cmp(&self.base).then(self.sign.cmp(&other.sign))
    }
}

impl PartialOrd for SignedPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", self.base, s)
    }
}

impl FromStr for SignedPartition {
    type Err = CharError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, sign) = if let Some(b) = s.strip_suffix('+') {
            (b, Sign::Plus)
        } else if let Some(b) = s.strip_suffix('-').or_else(|| s.strip_suffix('−')) {
            (b, Sign::Minus)
        } else {
            return Err(GroupError::InvalidPartition(format!("{s:?} lacks a trailing + or -")).into());
        };
        Ok(Self { base: body.parse()?, sign })
    }
}

impl Serialize for SignedPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Fixed-point counts of `H₁ = Inn(G) × ⟨x ↦ x⁻¹⟩` acting on `G`, per
/// class of `G` and sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermChar {
    /// `#{x : g x g⁻¹ = x}` for a representative `g` of each class.
    pub plus: Vec<u64>,
    /// `#{x : g x⁻¹ g⁻¹ = x}`.
    pub minus: Vec<u64>,
}

pub fn perm_char_h1(group: &GroupTable, classes: &ConjugacyData) -> Result<PermChar, CharError> {
    if !inversion_closed(classes) {
        return Err(CharError::NotInversionClosed);
    }
    let n = group.order() as u64;
    let plus = classes.sizes.iter().map(|&s| n / s as u64).collect();
    let minus = classes.representatives.iter().map(|&g| inverted_fixed_points(group, g) as u64).collect();
    Ok(PermChar { plus, minus })
}

/// `⟨π, χ^{λ±}⟩` for every signed partition, in signed-partition order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    pub entries: BTreeMap<SignedPartition, u64>,
}

impl MultiplicityVector {
    pub fn get(&self, sp: &SignedPartition) -> u64 {
        self.entries.get(sp).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&SignedPartition, u64)> {
        self.entries.iter().filter(|(_, &m)| m > 0).map(|(k, &m)| (k, m))
    }

    /// Weighted character sum like `5χ[4]+ + 2χ[3,1]+`.
    pub fn display_sum(&self) -> String {
        self.nonzero()
            .map(|(sp, m)| if m == 1 { format!("χ{sp}") } else { format!("{m}χ{sp}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Multiplicities from class sums over `H₁`; the class of `G` labelled `μ`
/// must sit at index `μ` of `table`.
pub fn multiplicities(pi: &PermChar, table: &CharTable) -> Result<MultiplicityVector, CharError> {
    let sizes = table.class_sizes();
    let cover = 2 * factorial(table.n) as i128;
    let mut entries = BTreeMap::new();
    for (l, lambda) in table.partitions.iter().enumerate() {
        for sign in [Sign::Plus, Sign::Minus] {
            let num: i128 = (0..sizes.len())
                .map(|m| {
                    let chi = table.values[l][m];
                    sizes[m] as i128 * chi * (pi.plus[m] as i128 + sign.value() * pi.minus[m] as i128)
                })
                .sum();
            let sp = SignedPartition::new(lambda.clone(), sign);
            if num % cover != 0 || num < 0 {
                return Err(CharError::NonIntegral { what: format!("multiplicity of {sp}"), numerator: num, denominator: cover });
            }
            entries.insert(sp, (num / cover) as u64);
        }
    }
    Ok(MultiplicityVector { entries })
}

/// The matrix sizes of the centralizer algebra's simple components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralizerWedderburn {
    pub components: Vec<(SignedPartition, u64)>,
    pub dim: u64,
}

pub fn centralizer_wedderburn(m: &MultiplicityVector) -> CentralizerWedderburn {
    let components: Vec<(SignedPartition, u64)> = m.nonzero().map(|(k, v)| (k.clone(), v)).collect();
    let dim = components.iter().map(|(_, v)| v * v).sum();
    CentralizerWedderburn { components, dim }
}

/// Characters of `S_n` aligned with the conjugacy classes of a symmetric
/// group table.
pub fn char_table_for(classes: &ConjugacyData) -> Result<CharTable, CharError> {
    let labels = classes.labels.as_ref().ok_or(CharError::NotSymmetric)?;
    let n = labels[0].n();
    let table = char_table(n)?;
    debug_assert_eq!(&table.partitions, labels);
    Ok(table)
}
