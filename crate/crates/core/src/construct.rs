//! Explicit squares built without search: the column completion for
//! length-3 patterns, the cyclic avoiders, the Connolly square, and the
//! relabeling and rotation bijections between avoider sets.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::square::{LatinSquare, MAX_ORDER};

/// Where the given row sits for [`complete_columns_avoiding`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorRow {
    Top,
    Bottom,
}

/// How a length-3 pattern's avoiding columns are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ColumnRule {
    anchor: AnchorRow,
    /// Columns are completed in increasing order of their anchor symbol
    /// (starting from the one holding 1) or decreasing (starting from n).
    ascending: bool,
    /// Read away from the anchor, the entries continue downward (`j-1, j-2,
    /// …`) rather than upward (`j+1, j+2, …`).
    descending_run: bool,
}

fn column_rule(pattern: &Permutation) -> Result<ColumnRule> {
    use AnchorRow::*;
    let rule = match pattern.entries() {
        [1, 2, 3] => ColumnRule {
            anchor: Top,
            ascending: true,
            descending_run: true,
        },
        [1, 3, 2] => ColumnRule {
            anchor: Top,
            ascending: true,
            descending_run: false,
        },
        [3, 1, 2] => ColumnRule {
            anchor: Top,
            ascending: false,
            descending_run: true,
        },
        [3, 2, 1] => ColumnRule {
            anchor: Top,
            ascending: false,
            descending_run: false,
        },
        // read bottom-up these are 132 and 312
        [2, 3, 1] => ColumnRule {
            anchor: Bottom,
            ascending: true,
            descending_run: false,
        },
        [2, 1, 3] => ColumnRule {
            anchor: Bottom,
            ascending: false,
            descending_run: true,
        },
        _ => {
            return Err(Error::Precondition(format!(
                "pattern {} is not of length three",
                pattern.to_compact_string()
            )))
        }
    };
    Ok(rule)
}

/// Which row [`complete_columns_avoiding`] treats as given for `pattern`.
pub fn anchor_row(pattern: &Permutation) -> Result<AnchorRow> {
    column_rule(pattern).map(|r| r.anchor)
}

/// The unique square whose columns avoid the length-3 `pattern` and whose
/// anchor row is `anchor`: the top row, or for 231 and 213 the bottom row.
///
/// Columns are completed one at a time in order of their anchor symbol.
/// Reading away from the anchor `j`, the symbols on one side of `j` must
/// form a monotone run and the other side is forced after them; the
/// column whose anchor is visited last is completed from what each row is
/// still missing.
pub fn complete_columns_avoiding(
    anchor: &Permutation,
    pattern: &Permutation,
) -> Result<LatinSquare> {
    let rule = column_rule(pattern)?;
    let n = anchor.len();
    if n > MAX_ORDER {
        return Err(Error::Precondition(format!(
            "order {n} exceeds {MAX_ORDER}"
        )));
    }
    // lines[j] is column j read away from the anchor row
    let mut lines: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| anchor.entries()[j]);
    if !rule.ascending {
        order.reverse();
    }
    let (last, rest) = order.split_last().expect("n >= 1");
    for &j in rest {
        let a = anchor.entries()[j];
        let below = 1..a;
        let above = a + 1..=n as u32;
        let mut line = vec![a];
        if rule.descending_run {
            // a, a-1, …, 1, n, n-1, …, a+1
            line.extend(below.rev());
            line.extend(above.rev());
        } else {
            // a, a+1, …, n, 1, 2, …, a-1
            line.extend(above);
            line.extend(below);
        }
        lines[j] = line;
    }
    let mut last_line = Vec::with_capacity(n);
    for depth in 0..n {
        let mut seen = vec![false; n + 1];
        for (j, line) in lines.iter().enumerate() {
            if j != *last {
                seen[line[depth] as usize] = true;
            }
        }
        let missing = (1..=n).find(|&v| !seen[v]).ok_or_else(|| {
            Error::Precondition("column completion left no symbol for the last column".into())
        })?;
        last_line.push(missing as u32);
    }
    lines[*last] = last_line;
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|depth| {
            let r = match rule.anchor {
                AnchorRow::Top => depth,
                AnchorRow::Bottom => n - 1 - depth,
            };
            (0..n).map(|j| lines[j][r]).collect()
        })
        .collect();
    LatinSquare::from_rows(&rows)
}

/// The π-avoiding square of order `n` with top-left symbol `start`, from
/// the closed form: every row and column is cyclically decreasing for the
/// even patterns 123, 231, 312 and cyclically increasing for the odd ones.
pub fn construct_s3_avoider(n: usize, pattern: &Permutation, start: usize) -> Result<LatinSquare> {
    if pattern.len() != 3 {
        return Err(Error::Precondition(format!(
            "pattern {} is not of length three",
            pattern.to_compact_string()
        )));
    }
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Precondition(format!("order {n} out of range")));
    }
    if start == 0 || start > n {
        return Err(Error::Precondition(format!(
            "start symbol {start} outside 1..={n}"
        )));
    }
    let step: isize = if pattern.is_even() { -1 } else { 1 };
    let n_i = n as isize;
    LatinSquare::from_fn(n, |i, j| {
        let offset = step * ((i + j - 2) as isize);
        ((start as isize - 1 + offset).rem_euclid(n_i) + 1) as u32
    })
}

/// The `n` avoiders of a length-3 pattern, by top-left symbol.
pub fn all_s3_avoiders(n: usize, pattern: &Permutation) -> Result<Vec<LatinSquare>> {
    (1..=n)
        .map(|i| construct_s3_avoider(n, pattern, i))
        .collect()
}

/// The order-`root²` square whose `(i, j)` entry is `k·root mod (root²+1)`
/// with `k ≡ i+j-1 (mod root²)`, both reduced into `1..=root²`.
pub fn connolly_square(root: usize) -> Result<LatinSquare> {
    let order = root
        .checked_mul(root)
        .filter(|&o| root >= 1 && o <= MAX_ORDER)
        .ok_or_else(|| Error::Precondition(format!("root {root} out of range")))?;
    let (o, r) = (order as u64, root as u64);
    LatinSquare::from_fn(order, |i, j| {
        let k = (i as u64 + j as u64 - 2) % o + 1;
        // k·r is never a multiple of r²+1, so the residue is already in 1..=r²
        ((k * r) % (o + 1)) as u32
    })
}

/// Replaces every symbol `e` by `n+1-e`; carries π-avoiders to
/// complement(π)-avoiders.
pub fn complement_map(square: &LatinSquare) -> LatinSquare {
    let map = Permutation::decreasing(square.order());
    square.relabel(&map).expect("orders match")
}

/// Rotation by 180 degrees; carries π-avoiders to reverse(π)-avoiders.
pub fn reverse_map(square: &LatinSquare) -> LatinSquare {
    square.rotate180()
}

/// Relabels by `target ∘ source⁻¹`, carrying avoiders of the full-length
/// pattern `source` to avoiders of `target`.
pub fn relabel_map(
    square: &LatinSquare,
    source: &Permutation,
    target: &Permutation,
) -> Result<LatinSquare> {
    let n = square.order();
    for p in [source, target] {
        if p.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: p.len(),
            });
        }
    }
    square.relabel(&target.compose(&source.inverse())?)
}
