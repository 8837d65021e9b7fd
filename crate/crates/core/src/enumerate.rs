//! Backtracking enumeration of Latin squares with online avoidance pruning.
//!
//! Cells are filled row-major and symbols tried in increasing order, so
//! squares are produced in lexicographic order of their row-major grids.
//! After each placement the new cell's row prefix, column prefix and the
//! placed symbol's row-to-column prefix are tested for an occurrence of a
//! forbidden pattern that ends at the new entry. Rows above the current
//! one are complete, so all three prefixes are fixed from then on and
//! containment can only persist under extension; cutting the subtree is
//! therefore sound.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{CompiledPattern, Permutation};
use crate::square::LatinSquare;

/// Hard ceiling from the `u64` occupancy masks.
pub const MAX_ENUMERATION_ORDER: usize = 32;

/// Pattern sets for rows, columns and symbol permutations. Avoidance in the
/// usual sense is `rows = cols = {π}` with no symbol patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AvoidanceSpec {
    rows: BTreeSet<Permutation>,
    cols: BTreeSet<Permutation>,
    symbols: BTreeSet<Permutation>,
}

impl AvoidanceSpec {
    pub fn new(
        rows: impl IntoIterator<Item = Permutation>,
        cols: impl IntoIterator<Item = Permutation>,
        symbols: impl IntoIterator<Item = Permutation>,
    ) -> Self {
        AvoidanceSpec {
            rows: rows.into_iter().collect(),
            cols: cols.into_iter().collect(),
            symbols: symbols.into_iter().collect(),
        }
    }

    /// Every row and every column avoids `pattern`.
    pub fn rows_and_cols(pattern: Permutation) -> Self {
        Self::new([pattern.clone()], [pattern], [])
    }

    pub fn rows_only(patterns: impl IntoIterator<Item = Permutation>) -> Self {
        Self::new(patterns, [], [])
    }

    pub fn cols_only(patterns: impl IntoIterator<Item = Permutation>) -> Self {
        Self::new([], patterns, [])
    }

    pub fn symbols_only(patterns: impl IntoIterator<Item = Permutation>) -> Self {
        Self::new([], [], patterns)
    }

    pub fn row_patterns(&self) -> impl Iterator<Item = &Permutation> {
        self.rows.iter()
    }

    pub fn col_patterns(&self) -> impl Iterator<Item = &Permutation> {
        self.cols.iter()
    }

    pub fn symbol_patterns(&self) -> impl Iterator<Item = &Permutation> {
        self.symbols.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty() && self.symbols.is_empty()
    }

    /// Whether any pattern is short enough to ever prune at order `n`.
    pub fn restricts(&self, n: usize) -> bool {
        self.rows
            .iter()
            .chain(&self.cols)
            .chain(&self.symbols)
            .any(|p| p.len() <= n)
    }

    /// Stable textual form, e.g. `rows=123;cols=123;symbols=`.
    pub fn canonical(&self) -> String {
        let join = |set: &BTreeSet<Permutation>| {
            set.iter()
                .map(|p| {
                    p.entries()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "rows={};cols={};symbols={}",
            join(&self.rows),
            join(&self.cols),
            join(&self.symbols)
        )
    }
}

/// Feasibility bounds for exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Largest order searched when no pattern can prune.
    pub max_unrestricted_order: usize,
    /// Largest order searched when some pattern can prune.
    pub max_pruned_order: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            max_unrestricted_order: 6,
            max_pruned_order: 12,
        }
    }
}

impl EnumerationConfig {
    pub fn check(&self, n: usize, spec: &AvoidanceSpec) -> Result<()> {
        if n == 0 {
            return Err(Error::Precondition("order must be at least 1".into()));
        }
        let limit = if spec.restricts(n) {
            self.max_pruned_order
        } else {
            self.max_unrestricted_order
        }
        .min(MAX_ENUMERATION_ORDER);
        if n > limit {
            return Err(Error::BoundExceeded {
                what: "order",
                requested: n,
                limit,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    pub order: usize,
    pub spec: AvoidanceSpec,
    #[serde(with = "crate::bigcount")]
    pub count: BigUint,
    /// Symbol placements that passed the Latin and avoidance checks.
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// A subtree of the search: every square whose first `prefix.len()` cells
/// (row-major) equal `prefix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationTask {
    pub order: usize,
    pub spec: AvoidanceSpec,
    pub prefix: Vec<u8>,
}

struct Search {
    n: usize,
    full: u64,
    grid: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// `symbol_cols[(v - 1) * n + r]` is the column (1-based) of symbol `v`
    /// in row `r`.
    symbol_cols: Vec<u8>,
    column_buf: Vec<u8>,
    rows: Vec<CompiledPattern>,
    cols: Vec<CompiledPattern>,
    symbols: Vec<CompiledPattern>,
    nodes: u64,
}

impl Search {
    fn new(n: usize, spec: &AvoidanceSpec) -> Self {
        let usable = |set: &BTreeSet<Permutation>| -> Vec<CompiledPattern> {
            set.iter()
                .filter(|p| p.len() <= n)
                .map(CompiledPattern::new)
                .collect()
        };
        Search {
            n,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            grid: vec![0; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            symbol_cols: vec![0; n * n],
            column_buf: Vec::with_capacity(n),
            rows: usable(&spec.rows),
            cols: usable(&spec.cols),
            symbols: usable(&spec.symbols),
            nodes: 0,
        }
    }

    fn place(&mut self, cell: usize, v: u8) {
        let (r, c) = (cell / self.n, cell % self.n);
        let bit = 1u64 << (v - 1);
        self.grid[cell] = v;
        self.row_used[r] |= bit;
        self.col_used[c] |= bit;
        self.symbol_cols[(v as usize - 1) * self.n + r] = c as u8 + 1;
    }

    fn unplace(&mut self, cell: usize) {
        let (r, c) = (cell / self.n, cell % self.n);
        let v = self.grid[cell];
        let bit = 1u64 << (v - 1);
        self.grid[cell] = 0;
        self.row_used[r] &= !bit;
        self.col_used[c] &= !bit;
        self.symbol_cols[(v as usize - 1) * self.n + r] = 0;
    }

    /// Whether the entry just placed at `cell` completes a forbidden
    /// occurrence in its row, column, or symbol prefix.
    fn violates(&mut self, cell: usize) -> bool {
        let n = self.n;
        let (r, c) = (cell / n, cell % n);
        if !self.rows.is_empty() {
            let prefix = &self.grid[r * n..=r * n + c];
            if self.rows.iter().any(|p| p.occurs_ending_at_last(prefix)) {
                return true;
            }
        }
        if !self.cols.is_empty() {
            self.column_buf.clear();
            self.column_buf
                .extend((0..=r).map(|i| self.grid[i * n + c]));
            if self
                .cols
                .iter()
                .any(|p| p.occurs_ending_at_last(&self.column_buf))
            {
                return true;
            }
        }
        if !self.symbols.is_empty() {
            let v = self.grid[cell] as usize;
            let prefix = &self.symbol_cols[(v - 1) * n..=(v - 1) * n + r];
            if self.symbols.iter().any(|p| p.occurs_ending_at_last(prefix)) {
                return true;
            }
        }
        false
    }

    /// Replays a prefix that is already known to be consistent.
    fn load_prefix(&mut self, prefix: &[u8]) {
        for (cell, &v) in prefix.iter().enumerate() {
            self.place(cell, v);
        }
    }

    /// Explores every completion from `cell`, stopping at `stop` cells.
    fn descend(&mut self, cell: usize, stop: usize, visit: &mut dyn FnMut(&[u8])) {
        if cell == stop {
            visit(&self.grid[..stop]);
            return;
        }
        let n = self.n;
        let (r, c) = (cell / n, cell % n);
        let mut avail = self.full & !(self.row_used[r] | self.col_used[c]);
        while avail != 0 {
            let v = avail.trailing_zeros() as u8 + 1;
            avail &= avail - 1;
            self.place(cell, v);
            if !self.violates(cell) {
                self.nodes += 1;
                self.descend(cell + 1, stop, visit);
            }
            self.unplace(cell);
        }
    }
}

/// Whether a partial row-major prefix is consistent with the Latin property
/// and with `spec`.
fn prefix_is_consistent(n: usize, spec: &AvoidanceSpec, prefix: &[u8]) -> bool {
    let mut search = Search::new(n, spec);
    for (cell, &v) in prefix.iter().enumerate() {
        let (r, c) = (cell / n, cell % n);
        if v == 0 || v as usize > n {
            return false;
        }
        let bit = 1u64 << (v - 1);
        if (search.row_used[r] | search.col_used[c]) & bit != 0 {
            return false;
        }
        search.place(cell, v);
        if search.violates(cell) {
            return false;
        }
    }
    true
}

/// Progress notification after each finished task.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub done: usize,
    pub total: usize,
}

/// Runs searches, optionally split into tasks and spread over a worker
/// pool. Results never depend on `jobs`.
#[derive(Clone, Debug)]
pub struct Enumerator {
    config: EnumerationConfig,
    jobs: usize,
    split_depth: Option<usize>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            config: EnumerationConfig::default(),
            jobs: 1,
            split_depth: None,
        }
    }
}

impl Enumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_config(mut self, config: EnumerationConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    /// Number of leading cells fixed per task. Defaults to the first row
    /// for `n >= 4` and no split otherwise.
    pub fn with_split_depth(mut self, depth: usize) -> Self {
        self.split_depth = Some(depth);
        self
    }

    pub fn config(&self) -> &EnumerationConfig {
        &self.config
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    fn depth_for(&self, n: usize) -> usize {
        self.split_depth
            .unwrap_or(if n >= 4 { n } else { 0 })
            .min(n * n)
    }

    /// Calls `visitor` once per satisfying square, in lexicographic order.
    pub fn for_each(
        &self,
        n: usize,
        spec: &AvoidanceSpec,
        mut visitor: impl FnMut(&LatinSquare),
    ) -> Result<()> {
        self.config.check(n, spec)?;
        let mut search = Search::new(n, spec);
        search.descend(0, n * n, &mut |grid| {
            visitor(&LatinSquare::from_grid_unchecked(n, grid.to_vec()))
        });
        Ok(())
    }

    pub fn count(&self, n: usize, spec: &AvoidanceSpec) -> Result<CountResult> {
        self.count_with_progress(n, spec, &|_| {})
    }

    pub fn count_with_progress(
        &self,
        n: usize,
        spec: &AvoidanceSpec,
        progress: &(dyn Fn(Progress) + Sync),
    ) -> Result<CountResult> {
        let started = Instant::now();
        let (count, nodes) =
            self.fold_grids(n, spec, || 0u64, |acc, _| *acc += 1, |a, b| a + b, progress)?;
        Ok(CountResult {
            order: n,
            spec: spec.clone(),
            count: BigUint::from(count),
            nodes_explored: nodes,
            elapsed: started.elapsed(),
        })
    }

    /// All satisfying squares in lexicographic order.
    pub fn collect(&self, n: usize, spec: &AvoidanceSpec) -> Result<Vec<LatinSquare>> {
        self.fold(
            n,
            spec,
            Vec::new,
            |acc: &mut Vec<LatinSquare>, s| acc.push(s.clone()),
            |mut a, b| {
                a.extend(b);
                a
            },
            &|_| {},
        )
    }

    /// Folds over every satisfying square. Each task folds from `init()`;
    /// task results are merged left to right in task order, so the result
    /// is the same for any number of workers.
    pub fn fold<T: Send>(
        &self,
        n: usize,
        spec: &AvoidanceSpec,
        init: impl Fn() -> T + Sync,
        step: impl Fn(&mut T, &LatinSquare) + Sync,
        merge: impl Fn(T, T) -> T,
        progress: &(dyn Fn(Progress) + Sync),
    ) -> Result<T> {
        self.fold_grids(
            n,
            spec,
            init,
            |acc, grid| step(acc, &LatinSquare::from_grid_unchecked(n, grid.to_vec())),
            merge,
            progress,
        )
        .map(|(t, _)| t)
    }

    fn fold_grids<T: Send>(
        &self,
        n: usize,
        spec: &AvoidanceSpec,
        init: impl Fn() -> T + Sync,
        step: impl Fn(&mut T, &[u8]) + Sync,
        merge: impl Fn(T, T) -> T,
        progress: &(dyn Fn(Progress) + Sync),
    ) -> Result<(T, u64)> {
        self.config.check(n, spec)?;
        let depth = self.depth_for(n);
        let (tasks, prefix_nodes) = split(n, spec, depth);
        let total = tasks.len();
        let done = AtomicUsize::new(0);
        let run = |prefix: &Vec<u8>| {
            let mut search = Search::new(n, spec);
            search.load_prefix(prefix);
            let mut acc = init();
            search.descend(prefix.len(), n * n, &mut |grid| step(&mut acc, grid));
            let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
            progress(Progress {
                done: finished,
                total,
            });
            (acc, search.nodes)
        };
        let parts: Vec<(T, u64)> = if self.jobs <= 1 || total <= 1 {
            tasks.iter().map(run).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .map_err(|e| Error::Precondition(format!("worker pool: {e}")))?;
            pool.install(|| tasks.par_iter().map(run).collect())
        };
        let mut nodes = prefix_nodes;
        let mut merged: Option<T> = None;
        for (part, part_nodes) in parts {
            nodes += part_nodes;
            merged = Some(match merged {
                None => part,
                Some(acc) => merge(acc, part),
            });
        }
        Ok((merged.unwrap_or_else(init), nodes))
    }
}

/// Consistent prefixes of length `depth`, in lexicographic order, and the
/// number of placements made while generating them.
fn split(n: usize, spec: &AvoidanceSpec, depth: usize) -> (Vec<Vec<u8>>, u64) {
    let mut search = Search::new(n, spec);
    let mut prefixes = Vec::new();
    search.descend(0, depth, &mut |grid| prefixes.push(grid.to_vec()));
    (prefixes, search.nodes)
}

/// Visits every order-`n` square satisfying `spec`, lexicographically,
/// with the default feasibility bounds.
pub fn enumerate_squares(
    n: usize,
    spec: &AvoidanceSpec,
    visitor: impl FnMut(&LatinSquare),
) -> Result<()> {
    Enumerator::new().for_each(n, spec, visitor)
}

pub fn count_squares(n: usize, spec: &AvoidanceSpec) -> Result<CountResult> {
    Enumerator::new().count(n, spec)
}

/// Squares whose columns avoid `pattern`; rows unrestricted.
pub fn count_column_avoiders(n: usize, pattern: &Permutation) -> Result<CountResult> {
    count_squares(n, &AvoidanceSpec::cols_only([pattern.clone()]))
}

/// Splits the search into disjoint subtrees covering it, one per
/// consistent prefix of `split_depth` cells.
pub fn partition_tasks(
    n: usize,
    spec: &AvoidanceSpec,
    split_depth: usize,
) -> Result<Vec<EnumerationTask>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::Precondition(format!("order {n} out of range")));
    }
    if split_depth > n * n {
        return Err(Error::Precondition(format!(
            "split depth {split_depth} exceeds {} cells",
            n * n
        )));
    }
    Ok(split(n, spec, split_depth)
        .0
        .into_iter()
        .map(|prefix| EnumerationTask {
            order: n,
            spec: spec.clone(),
            prefix,
        })
        .collect())
}

impl EnumerationTask {
    /// Number of satisfying squares in this subtree.
    pub fn count(&self) -> u64 {
        let mut search = Search::new(self.order, &self.spec);
        search.load_prefix(&self.prefix);
        let mut count = 0u64;
        let total = self.order * self.order;
        search.descend(self.prefix.len(), total, &mut |_| count += 1);
        count
    }

    pub fn is_consistent(&self) -> bool {
        prefix_is_consistent(self.order, &self.spec, &self.prefix)
    }
}

/// All satisfying squares whose first row is `first_row`.
pub fn enumerate_with_first_row(
    n: usize,
    first_row: &Permutation,
    spec: &AvoidanceSpec,
) -> Result<Vec<LatinSquare>> {
    if first_row.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: first_row.len(),
        });
    }
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::Precondition(format!("order {n} out of range")));
    }
    let prefix: Vec<u8> = first_row.entries().iter().map(|&v| v as u8).collect();
    if !prefix_is_consistent(n, spec, &prefix) {
        return Ok(Vec::new());
    }
    let mut search = Search::new(n, spec);
    search.load_prefix(&prefix);
    let mut out = Vec::new();
    search.descend(n, n * n, &mut |grid| {
        out.push(LatinSquare::from_grid_unchecked(n, grid.to_vec()))
    });
    Ok(out)
}
