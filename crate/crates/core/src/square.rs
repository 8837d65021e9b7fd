//! Latin squares and the symmetry maps used by the avoidance bijections.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::AvoidanceSpec;
use crate::error::{Error, LineKind, Result};
use crate::perm::{longest_monotone, CompiledPattern, Permutation};

/// Largest order representable; symbols are stored as `u8`.
pub const MAX_ORDER: usize = 255;

/// An `n x n` grid over `1..=n` with every symbol once per row and column.
/// Stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    order: usize,
    grid: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct SquareJson {
    order: usize,
    grid: Vec<Vec<u32>>,
}

impl LatinSquare {
    /// Builds a square from rows, validating the Latin property.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedGrid("no rows".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::MalformedGrid(format!(
                "order {n} exceeds {MAX_ORDER}"
            )));
        }
        let mut grid = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedGrid(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for &v in row {
                if v == 0 || v as usize > n {
                    return Err(Error::MalformedGrid(format!(
                        "row {} has symbol {v} outside 1..={n}",
                        i + 1
                    )));
                }
                grid.push(v as u8);
            }
        }
        Self::from_grid(n, grid)
    }

    /// Row-major grid of symbols `1..=n`.
    pub fn from_grid(order: usize, grid: Vec<u8>) -> Result<Self> {
        if order == 0 || order > MAX_ORDER || grid.len() != order * order {
            return Err(Error::MalformedGrid(format!(
                "{} cells do not form an order-{order} grid",
                grid.len()
            )));
        }
        if let Some(&v) = grid.iter().find(|&&v| v == 0 || v as usize > order) {
            return Err(Error::MalformedGrid(format!(
                "symbol {v} outside 1..={order}"
            )));
        }
        let square = LatinSquare { order, grid };
        square.validate()?;
        Ok(square)
    }

    pub(crate) fn from_grid_unchecked(order: usize, grid: Vec<u8>) -> Self {
        let square = LatinSquare { order, grid };
        debug_assert!(square.validate().is_ok());
        square
    }

    fn validate(&self) -> Result<()> {
        let n = self.order;
        for i in 0..n {
            let mut seen = vec![false; n + 1];
            for j in 0..n {
                let v = self.grid[i * n + j] as usize;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::NotLatin {
                        line: LineKind::Row,
                        index: i + 1,
                        symbol: v as u32,
                    });
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n + 1];
            for i in 0..n {
                let v = self.grid[i * n + j] as usize;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::NotLatin {
                        line: LineKind::Column,
                        index: j + 1,
                        symbol: v as u32,
                    });
                }
            }
        }
        Ok(())
    }

    /// The square with entry `(i, j)` (1-indexed) given by `f(i, j)`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let rows: Vec<Vec<u32>> = (1..=order)
            .map(|i| (1..=order).map(|j| f(i, j)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 1-indexed `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.grid[(i - 1) * self.order + (j - 1)] as u32
    }

    pub fn grid(&self) -> &[u8] {
        &self.grid
    }

    /// Row `i` (1-indexed) as a slice of symbols.
    pub fn row(&self, i: usize) -> &[u8] {
        let n = self.order;
        &self.grid[(i - 1) * n..i * n]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        let n = self.order;
        (0..n).map(|i| self.grid[i * n + j - 1]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (1..=self.order)
            .map(|i| self.row(i).iter().map(|&v| v as u32).collect())
            .collect()
    }

    pub fn row_permutations(&self) -> Vec<Permutation> {
        (1..=self.order).map(|i| to_perm(self.row(i))).collect()
    }

    pub fn column_permutations(&self) -> Vec<Permutation> {
        (1..=self.order).map(|j| to_perm(&self.column(j))).collect()
    }

    /// For each symbol `k`, the permutation sending row `i` to the column
    /// holding `k` in that row.
    pub fn symbol_permutations(&self) -> Vec<Permutation> {
        let n = self.order;
        let mut perms = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                let k = self.grid[i * n + j] as usize;
                perms[k - 1][i] = j as u32 + 1;
            }
        }
        perms
            .into_iter()
            .map(Permutation::from_vec_unchecked)
            .collect()
    }

    /// Replaces every entry `e` by `map(e)`.
    pub fn relabel(&self, map: &Permutation) -> Result<Self> {
        if map.len() != self.order {
            return Err(Error::LengthMismatch {
                expected: self.order,
                found: map.len(),
            });
        }
        let grid = self
            .grid
            .iter()
            .map(|&v| map.at(v as usize) as u8)
            .collect();
        Ok(Self::from_grid_unchecked(self.order, grid))
    }

    /// Entry `(i, j)` moves to `(n+1-i, n+1-j)`.
    pub fn rotate180(&self) -> Self {
        let grid = self.grid.iter().rev().copied().collect();
        Self::from_grid_unchecked(self.order, grid)
    }

    /// Entry `(i, j)` moves to `(i, n+1-j)`.
    pub fn reflect_vertical(&self) -> Self {
        let n = self.order;
        let mut grid = Vec::with_capacity(n * n);
        for i in 1..=n {
            grid.extend(self.row(i).iter().rev());
        }
        Self::from_grid_unchecked(n, grid)
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut grid = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                grid[j * n + i] = self.grid[i * n + j];
            }
        }
        Self::from_grid_unchecked(n, grid)
    }

    pub fn avoids_spec(&self, spec: &AvoidanceSpec) -> bool {
        let n = self.order;
        let rows: Vec<CompiledPattern> = spec.row_patterns().map(CompiledPattern::new).collect();
        let cols: Vec<CompiledPattern> = spec.col_patterns().map(CompiledPattern::new).collect();
        let syms: Vec<CompiledPattern> = spec.symbol_patterns().map(CompiledPattern::new).collect();
        if !rows.is_empty() && (1..=n).any(|i| rows.iter().any(|p| p.occurs_in(self.row(i)))) {
            return false;
        }
        if !cols.is_empty() {
            for j in 1..=n {
                let col = self.column(j);
                if cols.iter().any(|p| p.occurs_in(&col)) {
                    return false;
                }
            }
        }
        if !syms.is_empty() {
            for perm in self.symbol_permutations() {
                if syms.iter().any(|p| p.occurs_in(perm.entries())) {
                    return false;
                }
            }
        }
        true
    }

    /// Longest monotone subsequence over all rows and columns.
    pub fn max_monotone(&self) -> usize {
        let n = self.order;
        let by_rows = (1..=n).map(|i| longest_monotone(self.row(i)));
        let by_cols = (1..=n).map(|j| longest_monotone(&self.column(j)));
        by_rows.chain(by_cols).max().unwrap_or(0)
    }

    /// Parses either the text grid or the JSON object form.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Self::from_json(trimmed);
        }
        let rows = parse_rows(text)?;
        Self::from_rows(&rows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SquareJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.grid.len() != raw.order {
            return Err(Error::MalformedGrid(format!(
                "declared order {} but grid has {} rows",
                raw.order,
                raw.grid.len()
            )));
        }
        Self::from_rows(&raw.grid)
    }

    /// `n` lines of space-separated symbols, newline-terminated.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Single-line JSON object with `order` and `grid`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("square JSON")
    }
}

/// Parses whitespace-separated integer lines, skipping blank lines.
pub(crate) fn parse_rows(text: &str) -> Result<Vec<Vec<u32>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("line {}: bad entry `{t}`", i + 1)))
                })
                .collect()
        })
        .collect()
}

fn to_perm(line: &[u8]) -> Permutation {
    Permutation::from_vec_unchecked(line.iter().map(|&v| v as u32).collect())
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.order {
            let row = self.row(i);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinSquare{:?}", self.rows())
    }
}

impl Serialize for LatinSquare {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SquareJson {
            order: self.order,
            grid: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatinSquare {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SquareJson::deserialize(d)?;
        if raw.grid.len() != raw.order {
            return Err(serde::de::Error::custom("grid size does not match order"));
        }
        LatinSquare::from_rows(&raw.grid).map_err(serde::de::Error::custom)
    }
}
