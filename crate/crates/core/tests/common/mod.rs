//! Brute-force oracles. None of these share code paths with the library
//! routines they check.
#![allow(dead_code)]

use itertools::Itertools;

/// Containment by trying every subsequence of the pattern's length.
pub fn naive_contains(host: &[u32], pattern: &[u32]) -> bool {
    let k = pattern.len();
    if k > host.len() {
        return false;
    }
    host.iter()
        .combinations(k)
        .any(|sub| (0..k).all(|i| (0..k).all(|j| (sub[i] < sub[j]) == (pattern[i] < pattern[j]))))
}

/// Index set of the first occurrence in lexicographic order of index sets.
pub fn naive_first_occurrence(host: &[u32], pattern: &[u32]) -> Option<Vec<usize>> {
    let k = pattern.len();
    (0..host.len()).combinations(k).find(|idx| {
        (0..k).all(|i| (0..k).all(|j| (host[idx[i]] < host[idx[j]]) == (pattern[i] < pattern[j])))
    })
}

/// Longest monotone subsequence by enumerating every subset.
pub fn naive_longest_monotone(values: &[u32]) -> usize {
    let n = values.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let sub: Vec<u32> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| values[i])
            .collect();
        let inc = sub.windows(2).all(|w| w[0] < w[1]);
        let dec = sub.windows(2).all(|w| w[0] > w[1]);
        if inc || dec {
            best = best.max(sub.len());
        }
    }
    best
}

pub fn all_perms(n: usize) -> Vec<Vec<u32>> {
    (1..=n as u32).permutations(n).collect()
}

/// Every order-`n` Latin square, built a whole row at a time from the
/// list of all permutations.
pub fn naive_latin_squares(n: usize) -> Vec<Vec<Vec<u32>>> {
    fn rec(n: usize, perms: &[Vec<u32>], rows: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if rows.len() == n {
            out.push(rows.clone());
            return;
        }
        for p in perms {
            if rows.iter().all(|r| r.iter().zip(p).all(|(a, b)| a != b)) {
                rows.push(p.clone());
                rec(n, perms, rows, out);
                rows.pop();
            }
        }
    }
    let perms = all_perms(n);
    let mut out = Vec::new();
    rec(n, &perms, &mut Vec::new(), &mut out);
    out
}

pub fn columns(rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = rows.len();
    (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

pub fn symbol_perms(rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = rows.len();
    let mut out = vec![vec![0; n]; n];
    for (i, r) in rows.iter().enumerate() {
        for (j, &k) in r.iter().enumerate() {
            out[k as usize - 1][i] = j as u32 + 1;
        }
    }
    out
}

/// Filter-mode avoidance using [`naive_contains`].
pub fn naive_avoids(
    rows: &[Vec<u32>],
    row_pats: &[Vec<u32>],
    col_pats: &[Vec<u32>],
    sym_pats: &[Vec<u32>],
) -> bool {
    let cols = columns(rows);
    let syms = symbol_perms(rows);
    rows.iter()
        .all(|r| row_pats.iter().all(|p| !naive_contains(r, p)))
        && cols
            .iter()
            .all(|c| col_pats.iter().all(|p| !naive_contains(c, p)))
        && syms
            .iter()
            .all(|s| sym_pats.iter().all(|p| !naive_contains(s, p)))
}

/// Reduced squares: first row and first column are `1..=n` in order.
/// Filled cell by cell with plain occupancy vectors.
pub fn count_reduced(n: usize) -> u64 {
    fn rec(n: usize, grid: &mut Vec<Vec<u32>>, cell: usize) -> u64 {
        if cell == n * n {
            return 1;
        }
        let (r, c) = (cell / n, cell % n);
        if r == 0 || c == 0 {
            return rec(n, grid, cell + 1);
        }
        let mut total = 0;
        for v in 1..=n as u32 {
            let in_row = grid[r][..c].contains(&v);
            let in_col = (0..r).any(|i| grid[i][c] == v);
            if !in_row && !in_col {
                grid[r][c] = v;
                total += rec(n, grid, cell + 1);
                grid[r][c] = 0;
            }
        }
        total
    }
    let mut grid = vec![vec![0u32; n]; n];
    for i in 0..n {
        grid[0][i] = i as u32 + 1;
        grid[i][0] = i as u32 + 1;
    }
    rec(n, &mut grid, 0)
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Catalan numbers from the binomial formula C(2m, m) / (m + 1).
pub fn catalan(m: u64) -> u64 {
    let mut binom: u64 = 1;
    for i in 0..m {
        binom = binom * (2 * m - i) / (i + 1);
    }
    binom / (m + 1)
}
