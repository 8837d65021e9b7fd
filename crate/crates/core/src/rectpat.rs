//! Latin rectangles as two-dimensional patterns.
//!
//! A square contains a rectangle `R` when some choice of rows and columns,
//! each taken in increasing order, induces a sub-rectangle order-isomorphic
//! to `R`: equal values stay equal and the relative order of distinct
//! values is preserved.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::square::{parse_rows, LatinSquare};

/// A `rows x cols` grid over `1..=alphabet_bound` with no repeats in any
/// row or column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatinRectangle {
    rows: usize,
    cols: usize,
    alphabet_bound: u32,
    grid: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RectangleJson {
    rows: usize,
    cols: usize,
    alphabet_bound: u32,
    grid: Vec<Vec<u32>>,
}

/// Rows and columns (1-based, increasing) of a matching sub-rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl LatinRectangle {
    /// `alphabet_bound` defaults to the largest entry when `None`.
    pub fn new(grid_rows: &[Vec<u32>], alphabet_bound: Option<u32>) -> Result<Self> {
        let rows = grid_rows.len();
        let cols = grid_rows.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedGrid(
                "rectangle needs at least one cell".into(),
            ));
        }
        if let Some((i, r)) = grid_rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::MalformedGrid(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
        let grid: Vec<u32> = grid_rows.iter().flatten().copied().collect();
        let max = grid.iter().copied().max().unwrap_or(0);
        let bound = alphabet_bound.unwrap_or(max);
        if let Some(&v) = grid.iter().find(|&&v| v == 0 || v > bound) {
            return Err(Error::MalformedGrid(format!(
                "entry {v} outside 1..={bound}"
            )));
        }
        let rect = LatinRectangle {
            rows,
            cols,
            alphabet_bound: bound,
            grid,
        };
        rect.validate()?;
        Ok(rect)
    }

    fn validate(&self) -> Result<()> {
        use crate::error::LineKind;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.at(i, j);
                if (j + 1..self.cols).any(|k| self.at(i, k) == v) {
                    return Err(Error::NotLatin {
                        line: LineKind::Row,
                        index: i + 1,
                        symbol: v,
                    });
                }
                if (i + 1..self.rows).any(|k| self.at(k, j) == v) {
                    return Err(Error::NotLatin {
                        line: LineKind::Column,
                        index: j + 1,
                        symbol: v,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet_bound(&self) -> u32 {
        self.alphabet_bound
    }

    /// 0-based access.
    fn at(&self, i: usize, j: usize) -> u32 {
        self.grid[i * self.cols + j]
    }

    pub fn grid_rows(&self) -> Vec<Vec<u32>> {
        self.grid.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    /// Entries replaced by their rank among the distinct values present.
    pub fn rank_pattern(&self) -> Vec<u32> {
        let mut distinct = self.grid.clone();
        distinct.sort_unstable();
        distinct.dedup();
        self.grid
            .iter()
            .map(|v| distinct.binary_search(v).expect("present") as u32 + 1)
            .collect()
    }

    /// Clockwise quarter turn: `(i, j)` moves to `(j, rows+1-i)`.
    pub fn rotate_90(&self) -> Self {
        let (p, q) = (self.rows, self.cols);
        let mut grid = vec![0; p * q];
        for i in 0..p {
            for j in 0..q {
                // new shape is q x p
                grid[j * p + (p - 1 - i)] = self.at(i, j);
            }
        }
        LatinRectangle {
            rows: q,
            cols: p,
            alphabet_bound: self.alphabet_bound,
            grid,
        }
    }

    /// The `1 x k` rectangle holding a single sequence.
    pub fn from_row(values: &[u32]) -> Result<Self> {
        Self::new(&[values.to_vec()], None)
    }

    /// Text grid (rows of integers) or the JSON object form.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let raw: RectangleJson =
                serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
            let rect = Self::new(&raw.grid, Some(raw.alphabet_bound))?;
            if rect.rows != raw.rows || rect.cols != raw.cols {
                return Err(Error::MalformedGrid(format!(
                    "declared {}x{} but grid is {}x{}",
                    raw.rows, raw.cols, rect.rows, rect.cols
                )));
            }
            return Ok(rect);
        }
        Self::new(&parse_rows(text)?, None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rectangle JSON")
    }
}

impl From<&LatinSquare> for LatinRectangle {
    fn from(square: &LatinSquare) -> Self {
        LatinRectangle {
            rows: square.order(),
            cols: square.order(),
            alphabet_bound: square.order() as u32,
            grid: square.grid().iter().map(|&v| v as u32).collect(),
        }
    }
}

impl fmt::Display for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.grid.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinRectangle{:?}", self.grid_rows())
    }
}

impl Serialize for LatinRectangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RectangleJson {
            rows: self.rows,
            cols: self.cols,
            alphabet_bound: self.alphabet_bound,
            grid: self.grid_rows(),
        }
        .serialize(s)
    }
}

/// Same shape and same rank pattern.
pub fn rect_order_isomorphic(a: &LatinRectangle, b: &LatinRectangle) -> bool {
    a.rows == b.rows && a.cols == b.cols && a.rank_pattern() == b.rank_pattern()
}

/// The first sub-rectangle of `square` order-isomorphic to `pattern`,
/// searching row subsets lexicographically and, within each, column
/// subsets lexicographically.
pub fn contains_rectangle(
    square: &LatinSquare,
    pattern: &LatinRectangle,
) -> Result<Option<RectWitness>> {
    let n = square.order();
    if pattern.rows > n || pattern.cols > n {
        return Err(Error::Precondition(format!(
            "{}x{} rectangle does not fit in an order-{n} square",
            pattern.rows, pattern.cols
        )));
    }
    let mut search = RectSearch {
        square,
        pattern,
        rows: Vec::with_capacity(pattern.rows),
        cols: Vec::with_capacity(pattern.cols),
    };
    Ok(search.rows_from(0).then(|| RectWitness {
        rows: search.rows.iter().map(|r| r + 1).collect(),
        cols: search.cols.iter().map(|c| c + 1).collect(),
    }))
}

struct RectSearch<'a> {
    square: &'a LatinSquare,
    pattern: &'a LatinRectangle,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl RectSearch<'_> {
    fn cell(&self, r: usize, c: usize) -> u8 {
        self.square.grid()[r * self.square.order() + c]
    }

    fn rows_from(&mut self, start: usize) -> bool {
        let n = self.square.order();
        let need = self.pattern.rows - self.rows.len();
        if need == 0 {
            return self.cols_from(0);
        }
        for r in start..=n - need {
            self.rows.push(r);
            if self.rows_from(r + 1) {
                return true;
            }
            self.rows.pop();
        }
        false
    }

    fn cols_from(&mut self, start: usize) -> bool {
        let n = self.square.order();
        let need = self.pattern.cols - self.cols.len();
        if need == 0 {
            return true;
        }
        let t = self.cols.len();
        for c in start..=n - need {
            if self.column_fits(t, c) {
                self.cols.push(c);
                if self.cols_from(c + 1) {
                    return true;
                }
                self.cols.pop();
            }
        }
        false
    }

    /// Whether placing pattern column `t` at square column `c` agrees in
    /// relative order with every cell already matched, and within itself.
    fn column_fits(&self, t: usize, c: usize) -> bool {
        let p = self.pattern;
        for (a, &ra) in self.rows.iter().enumerate() {
            let new_val = self.cell(ra, c);
            let new_pat = p.at(a, t);
            for (b, &rb) in self.rows.iter().enumerate() {
                for (u, &cu) in self.cols.iter().enumerate() {
                    if new_val.cmp(&self.cell(rb, cu)) != new_pat.cmp(&p.at(b, u)) {
                        return false;
                    }
                }
                if b < a && new_val.cmp(&self.cell(rb, c)) != new_pat.cmp(&p.at(b, t)) {
                    return false;
                }
            }
        }
        true
    }
}
