//! Square tables of block dimensions indexed by class labels.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?} (expected md, csv or json)")),
        }
    }
}

/// `dims[μ][λ]` for class labels `μ, λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTable {
    labels: Vec<String>,
    dims: Vec<Vec<usize>>,
}

impl BlockTable {
    pub fn new(labels: Vec<String>, dims: Vec<Vec<usize>>) -> Self {
        assert_eq!(labels.len(), dims.len());
        assert!(dims.iter().all(|row| row.len() == labels.len()));
        Self { labels, dims }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &Vec<Vec<usize>> {
        &self.dims
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.dims[row][col]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Entry by row and column label.
    pub fn at(&self, row: &str, col: &str) -> Option<usize> {
        Some(self.dims[self.index_of(row)?][self.index_of(col)?])
    }

    pub fn total(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let r = self.dims.len();
        (0..r).all(|i| (0..i).all(|k| self.dims[i][k] == self.dims[k][i]))
    }

    /// True iff every entry is at most the corresponding entry of `other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.dims.iter().flatten().zip(other.dims.iter().flatten()).all(|(a, b)| a <= b)
    }

    /// Restriction to the given row/column indices.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self {
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            dims: indices.iter().map(|&i| indices.iter().map(|&k| self.dims[i][k]).collect()).collect(),
        }
    }

    pub fn render(&self, format: TableFormat, title: &str) -> String {
        let cells: Vec<Vec<String>> =
            self.dims.iter().map(|row| row.iter().map(|d| d.to_string()).collect()).collect();
        match format {
            TableFormat::Markdown => markdown(title, &self.labels, &cells),
            TableFormat::Csv => csv(&self.labels, &cells),
            TableFormat::Json => serde_json::to_string_pretty(self).expect("serializable"),
        }
    }
}

/// A table shown relative to an earlier one, with cells `a+b` where the
/// later table grew.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub labels: Vec<String>,
    pub base: Vec<Vec<usize>>,
    pub growth: Vec<Vec<usize>>,
}

impl GrowthTable {
    /// Panics if `after` is smaller than `before` anywhere or the labels
    /// differ.
    pub fn between(before: &BlockTable, after: &BlockTable) -> Self {
        assert_eq!(before.labels, after.labels);
        let growth = before
            .dims
            .iter()
            .zip(&after.dims)
            .map(|(b, a)| b.iter().zip(a).map(|(&x, &y)| y.checked_sub(x).expect("tables only grow")).collect())
            .collect();
        Self { labels: before.labels.clone(), base: before.dims.clone(), growth }
    }

    pub fn cell(&self, row: usize, col: usize) -> String {
        match self.growth[row][col] {
            0 => self.base[row][col].to_string(),
            g => format!("{}+{}", self.base[row][col], g),
        }
    }

    pub fn total_growth(&self) -> usize {
        self.growth.iter().flatten().sum()
    }

    /// Indices of rows or columns that grew anywhere.
    pub fn changed_indices(&self) -> Vec<usize> {
        let r = self.labels.len();
        (0..r).filter(|&i| (0..r).any(|k| self.growth[i][k] > 0 || self.growth[k][i] > 0)).collect()
    }

    pub fn render(&self, format: TableFormat, title: &str) -> String {
        let r = self.labels.len();
        let cells: Vec<Vec<String>> = (0..r).map(|i| (0..r).map(|k| self.cell(i, k)).collect()).collect();
        match format {
            TableFormat::Markdown => markdown(title, &self.labels, &cells),
            TableFormat::Csv => csv(&self.labels, &cells),
            TableFormat::Json => serde_json::to_string_pretty(self).expect("serializable"),
        }
    }
}

fn markdown(title: &str, labels: &[String], cells: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = write!(out, "| {title} |");
    for l in labels {
        let _ = write!(out, " {l} |");
    }
    out.push('\n');
    out.push_str(&"|---".repeat(labels.len() + 1));
    out.push_str("|\n");
    for (label, row) in labels.iter().zip(cells) {
        let _ = write!(out, "| {label} |");
        for c in row {
            let _ = write!(out, " {c} |");
        }
        out.push('\n');
    }
    out
}

fn csv(labels: &[String], cells: &[Vec<String>]) -> String {
    let mut out = String::from("row_label,col_label,dim\n");
    for (rl, row) in labels.iter().zip(cells) {
        for (cl, c) in labels.iter().zip(row) {
            let _ = writeln!(out, "\"{rl}\",\"{cl}\",{c}");
        }
    }
    out
}
