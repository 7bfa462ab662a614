use super::{FieldCtx, LaError};

/// A sparse vector over a prime field: strictly increasing coordinates, no
/// stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(u32, u32)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    /// Builds from `(index, value)` pairs. Indices must be strictly
    /// increasing and in range; zero values are dropped.
    pub fn from_entries(dim: usize, entries: Vec<(u32, u32)>) -> Result<Self, LaError> {
        let mut prev: Option<u32> = None;
        for &(idx, _) in &entries {
            if idx as usize >= dim || prev.is_some_and(|p| p >= idx) {
                return Err(LaError::BadIndex { index: idx as usize, dim });
            }
            prev = Some(idx);
        }
        let entries = entries.into_iter().filter(|&(_, v)| v != 0).collect();
        Ok(Self { dim, entries })
    }

    /// Builds from dense values already reduced mod p.
    pub fn from_dense(values: &[u32]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i as u32, v))
            .collect();
        Self { dim: values.len(), entries }
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, entries: Vec<(u32, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(i, v)| v != 0 && (i as usize) < dim));
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinate of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|&(i, _)| i as usize)
    }

    pub fn get(&self, index: usize) -> u32 {
        match self.entries.binary_search_by_key(&(index as u32), |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.dim];
        for &(i, v) in &self.entries {
            out[i as usize] = v;
        }
        out
    }

    pub fn scale(&self, c: u32, field: &FieldCtx) -> Self {
        if c == 0 {
            return Self::zero(self.dim);
        }
        let entries = self.entries.iter().map(|&(i, v)| (i, field.mul(v, c))).collect();
        Self { dim: self.dim, entries }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: u32, other: &Self, field: &FieldCtx) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, va)), Some(&&(ib, vb))) => {
                    if ia < ib {
                        out.push((ia, va));
                        a.next();
                    } else if ib < ia {
                        let v = field.mul(c, vb);
                        if v != 0 {
                            out.push((ib, v));
                        }
                        b.next();
                    } else {
                        let v = field.add(va, field.mul(c, vb));
                        if v != 0 {
                            out.push((ia, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(ia, va)), None) => {
                    out.push((ia, va));
                    a.next();
                }
                (None, Some(&&(ib, vb))) => {
                    let v = field.mul(c, vb);
                    if v != 0 {
                        out.push((ib, v));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { dim: self.dim, entries: out }
    }
}

/// A sparse matrix stored as sorted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(u32, u32)>>,
}

/// Rows whose fill exceeds this fraction are read straight off the dense
/// accumulator instead of sorting touched columns.
const DENSE_FILL: f64 = 0.25;

impl SparseMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { nrows: n, ncols: n, rows: (0..n).map(|i| vec![(i as u32, 1)]).collect() }
    }

    /// Builds from per-row entries; each row is sorted and zeros dropped.
    /// Duplicate columns within a row are an error.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(u32, u32)>>) -> Result<Self, LaError> {
        let nrows = rows.len();
        let mut clean = Vec::with_capacity(nrows);
        for mut row in rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                let dup = row.windows(2).find(|w| w[0].0 == w[1].0).map(|w| w[0].0).unwrap_or(0);
                return Err(LaError::BadIndex { index: dup as usize, dim: ncols });
            }
            if let Some(&(c, _)) = row.iter().find(|&&(c, _)| c as usize >= ncols) {
                return Err(LaError::BadIndex { index: c as usize, dim: ncols });
            }
            row.retain(|&(_, v)| v != 0);
            clean.push(row);
        }
        Ok(Self { nrows, ncols, rows: clean })
    }

    pub fn from_dense(ncols: usize, dense: &[Vec<u32>]) -> Self {
        let rows = dense
            .iter()
            .map(|r| {
                r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect()
            })
            .collect();
        Self { nrows: dense.len(), ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, r: usize) -> &[(u32, u32)] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        match self.rows[r].binary_search_by_key(&(c as u32), |&(col, _)| col) {
            Ok(pos) => self.rows[r][pos].1,
            Err(_) => 0,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u32; self.ncols];
                for &(c, v) in row {
                    d[c as usize] = v;
                }
                d
            })
            .collect()
    }

    /// Sum of entries in each row, mod p.
    pub fn row_sums(&self, field: &FieldCtx) -> Vec<u32> {
        self.rows.iter().map(|row| row.iter().fold(0, |acc, &(_, v)| field.add(acc, v))).collect()
    }

    /// Exact product mod p (row-by-row accumulation).
    pub fn spmm(&self, other: &Self, field: &FieldCtx) -> Result<Self, LaError> {
        if self.ncols != other.nrows {
            return Err(LaError::DimensionMismatch { expected: self.ncols, found: other.nrows });
        }
        let p = field.prime();
        let n = other.ncols;
        let mut acc = vec![0u64; n];
        let mut touched_flag = vec![false; n];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            for &(k, a) in row {
                for &(c, b) in &other.rows[k as usize] {
                    let c_us = c as usize;
                    acc[c_us] = (acc[c_us] + a as u64 * b as u64) % p;
                    if !touched_flag[c_us] {
                        touched_flag[c_us] = true;
                        touched.push(c);
                    }
                }
            }
            let mut out = Vec::new();
            if touched.len() as f64 > DENSE_FILL * n as f64 {
                for (c, slot) in acc.iter_mut().enumerate() {
                    if *slot != 0 {
                        out.push((c as u32, *slot as u32));
                    }
                    *slot = 0;
                }
                for &c in &touched {
                    touched_flag[c as usize] = false;
                }
            } else {
                touched.sort_unstable();
                for &c in &touched {
                    let c_us = c as usize;
                    if acc[c_us] != 0 {
                        out.push((c, acc[c_us] as u32));
                    }
                    acc[c_us] = 0;
                    touched_flag[c_us] = false;
                }
            }
            touched.clear();
            rows.push(out);
        }
        Ok(Self { nrows: self.nrows, ncols: n, rows })
    }

    /// Entry-wise sum mod p.
    pub fn add(&self, other: &Self, field: &FieldCtx) -> Result<Self, LaError> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(LaError::DimensionMismatch { expected: self.nrows * self.ncols, found: other.nrows * other.ncols });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let va = SparseVec::from_sorted_unchecked(self.ncols, a.clone());
                let vb = SparseVec::from_sorted_unchecked(self.ncols, b.clone());
                va.add_scaled(1, &vb, field).entries
            })
            .collect();
        Ok(Self { nrows: self.nrows, ncols: self.ncols, rows })
    }
}

/// Row-major flattening into a vector of length `nrows·ncols`, checked
/// against the expected block shape.
pub fn vectorize(m: &SparseMat, shape: (usize, usize)) -> Result<SparseVec, LaError> {
    if (m.nrows, m.ncols) != shape {
        return Err(LaError::DimensionMismatch { expected: shape.0 * shape.1, found: m.nrows * m.ncols });
    }
    let ncols = m.ncols as u32;
    let entries = m
        .rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r as u32 * ncols + c, v)))
        .collect();
    Ok(SparseVec::from_sorted_unchecked(m.nrows * m.ncols, entries))
}

/// Inverse of [`vectorize`].
pub fn unflatten(v: &SparseVec, nrows: usize, ncols: usize) -> Result<SparseMat, LaError> {
    if v.dim() != nrows * ncols {
        return Err(LaError::DimensionMismatch { expected: nrows * ncols, found: v.dim() });
    }
    let mut rows = vec![Vec::new(); nrows];
    for &(i, val) in v.entries() {
        let i = i as usize;
        rows[i / ncols].push(((i % ncols) as u32, val));
    }
    Ok(SparseMat { nrows, ncols, rows })
}
