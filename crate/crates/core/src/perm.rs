//! Permutations used both as objects and as patterns.
//!
//! Entries are the values `1..=m` at every API boundary. Containment is a
//! positional depth-first search; the all-subsequences check lives in the
//! test oracles only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `m` accepted by [`count_avoiding_permutations`].
pub const MAX_BRUTE_FORCE_LENGTH: usize = 10;

/// A rearrangement of `1..=m`, `m >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    /// Validates that `entries` is a rearrangement of `1..=m` with `m >= 1`.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::InvalidPermutation("empty sequence".into()));
        }
        let mut seen = vec![false; m];
        for &v in &entries {
            let idx = v as usize;
            if idx == 0 || idx > m {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={m}"
                )));
            }
            if std::mem::replace(&mut seen[idx - 1], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeats")));
            }
        }
        Ok(Permutation { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    /// Standardizes any sequence of distinct values to the permutation with
    /// the same relative order.
    pub fn standardize<T: Ord>(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPermutation("empty sequence".into()));
        }
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
        if idx.windows(2).any(|w| values[w[0]] == values[w[1]]) {
            return Err(Error::InvalidPermutation("repeated value".into()));
        }
        let mut entries = vec![0u32; values.len()];
        for (rank, &pos) in idx.iter().enumerate() {
            entries[pos] = rank as u32 + 1;
        }
        Ok(Permutation { entries })
    }

    pub fn identity(m: usize) -> Self {
        assert!(m >= 1, "identity of length 0");
        Permutation {
            entries: (1..=m as u32).collect(),
        }
    }

    /// The decreasing permutation `m m-1 ... 1`.
    pub fn decreasing(m: usize) -> Self {
        assert!(m >= 1, "decreasing of length 0");
        Permutation {
            entries: (1..=m as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; a permutation has at least one entry.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// The value at 1-indexed position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.entries[i - 1]
    }

    pub fn complement(&self) -> Self {
        let top = self.len() as u32 + 1;
        Permutation {
            entries: self.entries.iter().map(|&v| top - v).collect(),
        }
    }

    pub fn reverse(&self) -> Self {
        Permutation {
            entries: self.entries.iter().rev().copied().collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0u32; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = i as u32 + 1;
        }
        Permutation { entries }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            entries: other
                .entries
                .iter()
                .map(|&v| self.entries[v as usize - 1])
                .collect(),
        })
    }

    /// Block sum: `self` on the low values, `other` shifted above it.
    pub fn direct_sum(&self, other: &Permutation) -> Self {
        let shift = self.len() as u32;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&v| v + shift));
        Permutation { entries }
    }

    /// Even permutations have an even number of inversions.
    pub fn is_even(&self) -> bool {
        let mut inversions = 0usize;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.entries[i] > self.entries[j] {
                    inversions += 1;
                }
            }
        }
        inversions.is_multiple_of(2)
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        CompiledPattern::new(pattern).occurs_in(&self.entries)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    pub fn longest_monotone(&self) -> usize {
        longest_monotone(&self.entries)
    }

    /// Parses whitespace- or comma-separated values, or the compact digit
    /// form (`2134`) when the text is a single token of at most nine digits.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let values: Vec<u32> = match tokens.as_slice() {
            [] => return Err(Error::Parse("empty permutation".into())),
            [single] if single.len() > 1 => {
                if single.len() > 9 || !single.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!(
                        "compact form `{single}` must be at most nine digits"
                    )));
                }
                single.bytes().map(|b| u32::from(b - b'0')).collect()
            }
            _ => tokens
                .iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad permutation entry `{t}`")))
                })
                .collect::<Result<_>>()?,
        };
        Permutation::new(values)
    }

    /// Compact digit form for length at most nine, space-separated otherwise.
    pub fn to_compact_string(&self) -> String {
        if self.len() <= 9 {
            self.entries.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_compact_string())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_compact_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Permutation::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A pattern prepared for repeated containment queries.
///
/// For each pattern index `t`, `below[t]` and `above[t]` are the earlier
/// indices holding the nearest smaller and nearest larger value. Against a
/// host of distinct values, checking the new host entry against those two
/// neighbours is equivalent to checking it against every earlier entry.
#[derive(Clone, Debug)]
pub struct CompiledPattern {
    len: usize,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl CompiledPattern {
    pub fn new(pattern: &Permutation) -> Self {
        let p = pattern.entries();
        let len = p.len();
        let mut below = Vec::with_capacity(len);
        let mut above = Vec::with_capacity(len);
        for t in 0..len {
            let lo = (0..t).filter(|&s| p[s] < p[t]).max_by_key(|&s| p[s]);
            let hi = (0..t).filter(|&s| p[s] > p[t]).min_by_key(|&s| p[s]);
            below.push(lo);
            above.push(hi);
        }
        CompiledPattern { len, below, above }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Containment anywhere in `host`. `host` must hold distinct values.
    pub fn occurs_in<T: Ord>(&self, host: &[T]) -> bool {
        if self.len > host.len() {
            return false;
        }
        let mut chosen = vec![0usize; self.len];
        self.search(host, &mut chosen, 0, 0, host.len())
    }

    /// 0-based host positions of the lexicographically first occurrence.
    pub fn first_occurrence<T: Ord>(&self, host: &[T]) -> Option<Vec<usize>> {
        if self.len > host.len() {
            return None;
        }
        let mut chosen = vec![0usize; self.len];
        self.search(host, &mut chosen, 0, 0, host.len())
            .then_some(chosen)
    }

    /// Containment by an occurrence whose last entry is the last entry of
    /// `host`. If `host[..len-1]` avoids the pattern, this is equivalent to
    /// `occurs_in(host)`.
    pub fn occurs_ending_at_last<T: Ord>(&self, host: &[T]) -> bool {
        if self.len > host.len() || self.len == 0 {
            return false;
        }
        let mut chosen = vec![0usize; self.len];
        chosen[self.len - 1] = host.len() - 1;
        if self.len == 1 {
            return true;
        }
        self.search(host, &mut chosen, 0, 0, host.len() - 1)
    }

    /// Places pattern index `t` at a host position in `start..end`. When
    /// `end < host.len()` the last pattern index is pinned to `end`.
    fn search<T: Ord>(
        &self,
        host: &[T],
        chosen: &mut [usize],
        t: usize,
        start: usize,
        end: usize,
    ) -> bool {
        let pinned_last = end < host.len();
        let free = if pinned_last { self.len - 1 } else { self.len };
        if t == free {
            return !pinned_last || self.fits(host, chosen, self.len - 1, chosen[self.len - 1]);
        }
        let remaining = free - t;
        let last_start = end - remaining;
        for pos in start..=last_start {
            if self.fits(host, chosen, t, pos) {
                chosen[t] = pos;
                if self.search(host, chosen, t + 1, pos + 1, end) {
                    return true;
                }
            }
        }
        false
    }

    #[inline]
    fn fits<T: Ord>(&self, host: &[T], chosen: &[usize], t: usize, pos: usize) -> bool {
        if let Some(s) = self.below[t] {
            if host[chosen[s]] >= host[pos] {
                return false;
            }
        }
        if let Some(s) = self.above[t] {
            if host[chosen[s]] <= host[pos] {
                return false;
            }
        }
        true
    }
}

/// Length of the longest strictly increasing subsequence, by patience
/// sorting: `tails[k]` is the least possible tail of an increasing
/// subsequence of length `k + 1`.
pub fn longest_increasing<T: Ord + Copy>(values: &[T]) -> usize {
    let mut tails: Vec<T> = Vec::with_capacity(values.len());
    for &v in values {
        match tails.binary_search(&v) {
            Ok(_) => {}
            Err(i) if i == tails.len() => tails.push(v),
            Err(i) => tails[i] = v,
        }
    }
    tails.len()
}

pub fn longest_decreasing<T: Ord + Copy>(values: &[T]) -> usize {
    let reversed: Vec<T> = values.iter().rev().copied().collect();
    longest_increasing(&reversed)
}

/// Longest strictly monotone subsequence, increasing or decreasing.
pub fn longest_monotone<T: Ord + Copy>(values: &[T]) -> usize {
    longest_increasing(values).max(longest_decreasing(values))
}

/// Whether `perm` has an increasing subsequence of length `p + 1` or a
/// decreasing one of length `q + 1`. Requires `len(perm) >= p*q + 1`.
pub fn check_erdos_szekeres(perm: &Permutation, p: usize, q: usize) -> Result<bool> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("p and q must be positive".into()));
    }
    let needed = p * q + 1;
    if perm.len() < needed {
        return Err(Error::Precondition(format!(
            "length {} is below p*q+1 = {needed}",
            perm.len()
        )));
    }
    Ok(longest_increasing(perm.entries()) > p || longest_decreasing(perm.entries()) > q)
}

/// `floor(sqrt(n - 1)) + 1`, in integer arithmetic.
pub fn erdos_szekeres_lambda(n: u64) -> u64 {
    assert!(n >= 1, "lambda is defined for n >= 1");
    isqrt(n - 1) + 1
}

/// Exact integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Every permutation of `1..=m` in lexicographic order.
pub fn all_permutations(m: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut current: Vec<u32> = (1..=m as u32).collect();
    loop {
        out.push(Permutation::from_vec_unchecked(current.clone()));
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

/// Advances `values` to the next lexicographic arrangement; returns false
/// (leaving it sorted descending) when it was the last one.
pub fn next_permutation<T: Ord>(values: &mut [T]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mut i = values.len() - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = values.len() - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Number of permutations of length `m` avoiding `pattern`, by brute force.
pub fn count_avoiding_permutations(m: usize, pattern: &Permutation) -> Result<u64> {
    if m > MAX_BRUTE_FORCE_LENGTH {
        return Err(Error::BoundExceeded {
            what: "permutation length",
            requested: m,
            limit: MAX_BRUTE_FORCE_LENGTH,
        });
    }
    if m == 0 {
        return Ok(1);
    }
    let compiled = CompiledPattern::new(pattern);
    let mut current: Vec<u32> = (1..=m as u32).collect();
    let mut count = 0u64;
    loop {
        if !compiled.occurs_in(&current) {
            count += 1;
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(count)
}

/// Compares two sequences of distinct values for order isomorphism.
pub fn order_isomorphic<A: Ord, B: Ord>(a: &[A], b: &[B]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a[i].cmp(&a[j]) == b[i].cmp(&b[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(p("13254").contains(&p("123")));
        assert!(!p("13254").contains(&p("321")));
        assert!(p("4321").avoids(&p("12")));
        for q in all_permutations(4) {
            assert!(q.contains(&p("1")));
        }
        assert!(!p("12").contains(&p("123")));
    }

    #[test]
    fn symmetries() {
        assert_eq!(p("1234").complement(), p("4321"));
        assert_eq!(p("2413").complement(), p("3142"));
        assert_eq!(p("1234").reverse(), p("4321"));
        assert_eq!(p("2413").reverse(), p("3142"));
        assert_eq!(p("2314").inverse(), p("3124"));
        assert_eq!(Permutation::identity(5).inverse(), Permutation::identity(5));
        assert_eq!(p("231").compose(&p("312")).unwrap(), p("123"));
        assert_eq!(p("1").direct_sum(&p("1")), p("12"));
        assert_eq!(p("21").direct_sum(&p("132")), p("21354"));
        assert!(matches!(
            p("12").compose(&p("123")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn parity() {
        let even: Vec<String> = all_permutations(3)
            .into_iter()
            .filter(|q| q.is_even())
            .map(|q| q.to_compact_string())
            .collect();
        assert_eq!(even, ["123", "231", "312"]);
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(Permutation::decreasing(6).longest_monotone(), 6);
        assert_eq!(p("369258147").longest_monotone(), 3);
        assert_eq!(p("13254").longest_monotone(), 3);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(erdos_szekeres_lambda(1), 1);
        assert_eq!(erdos_szekeres_lambda(5), 3);
        assert_eq!(erdos_szekeres_lambda(10), 4);
        assert_eq!(isqrt(u64::MAX), 4294967295);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
    }

    #[test]
    fn erdos_szekeres_precondition() {
        assert!(check_erdos_szekeres(&p("1234"), 2, 2).is_err());
        assert!(check_erdos_szekeres(&Permutation::identity(7), 2, 3).unwrap());
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(count_avoiding_permutations(5, &p("123")).unwrap(), 42);
        assert_eq!(count_avoiding_permutations(4, &p("2413")).unwrap(), 23);
        assert_eq!(count_avoiding_permutations(3, &p("1")).unwrap(), 0);
        assert!(count_avoiding_permutations(11, &p("123")).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(p("2 1 3 4"), p("2134"));
        assert_eq!(p("10 9 8 7 6 5 4 3 2 1"), Permutation::decreasing(10));
        assert!(Permutation::parse("1123").is_err());
        assert!(Permutation::parse("1234567890").is_err());
        assert!(Permutation::parse("").is_err());
        assert!(Permutation::parse("0").is_err());
        assert_eq!(p("1"), Permutation::identity(1));
    }

    #[test]
    fn standardize_relative_order() {
        assert_eq!(Permutation::standardize(&[6, 8, 3]).unwrap(), p("231"));
        assert!(Permutation::standardize(&[1, 1]).is_err());
    }

    #[test]
    fn ending_at_last() {
        let c = CompiledPattern::new(&p("123"));
        assert!(c.occurs_ending_at_last(&[1, 3, 2, 4]));
        assert!(!c.occurs_ending_at_last(&[1, 2, 4, 3, 0]));
        assert!(CompiledPattern::new(&p("1")).occurs_ending_at_last(&[5]));
    }

    #[test]
    fn first_occurrence_is_lexicographic() {
        let c = CompiledPattern::new(&p("132"));
        assert_eq!(c.first_occurrence(&[2, 1, 5, 4, 3]), Some(vec![0, 2, 3]));
        assert_eq!(c.first_occurrence(&[3, 2, 1]), None);
        assert_eq!(
            CompiledPattern::new(&p("1")).first_occurrence(&[7]),
            Some(vec![0])
        );
    }
}
