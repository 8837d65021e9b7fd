//! Quantities derived from the enumerator: forced monotone subsequence
//! lengths, Wilf classes, the full-length-pattern formula, and exhaustive
//! checks of the structural results for length-3 patterns.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::construct::{all_s3_avoiders, connolly_square, relabel_map};
use crate::enumerate::{AvoidanceSpec, Enumerator, Progress};
use crate::error::{Error, Result};
use crate::perm::{
    all_permutations, check_erdos_szekeres, isqrt, longest_monotone, next_permutation, Permutation,
};
use crate::square::LatinSquare;

/// Largest order for which Λ is computed by full enumeration.
pub const MAX_EXHAUSTIVE_LAMBDA_ORDER: usize = 5;

/// Largest `m` with `(m-1)(m-2) + 2 <= n`: every order-`n` square has a
/// row or column with a monotone subsequence of this length.
pub fn lambda_lower_bound(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Precondition("the bound is stated for n >= 2".into()));
    }
    // (m-1)(m-2) is increasing for m >= 2
    let mut m = 2 + isqrt(n);
    while (m - 1) * (m - 2) + 2 > n {
        m -= 1;
    }
    Ok(m)
}

/// `floor(3/2 + sqrt(n - 7/4))`, computed as `floor((3 + sqrt(4n - 7)) / 2)`.
/// For non-square `4n-7` the root is irrational and the floor is unchanged
/// by truncating it first; for square `4n-7` the root is exact.
pub fn lambda_lower_bound_closed_form(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Precondition("the bound is stated for n >= 2".into()));
    }
    Ok((3 + isqrt(4 * n - 7)) / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMethod {
    Exhaustive,
    BoundOnly,
    WitnessCapped,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub order: usize,
    pub lower_bound: u64,
    /// Largest monotone line length of the witness, when there is one.
    pub upper_bound: Option<u64>,
    pub exact_value: Option<u64>,
    pub witness: Option<LatinSquare>,
    pub method: LambdaMethod,
}

fn report_lower_bound(n: usize) -> u64 {
    if n < 2 {
        n as u64
    } else {
        lambda_lower_bound(n as u64).expect("n >= 2")
    }
}

/// Λ for `n <= 5`: the minimum over all order-`n` squares of the longest
/// monotone subsequence in any row or column. The witness is the
/// lexicographically first square attaining it.
pub fn compute_lambda_exhaustive(n: usize, enumerator: &Enumerator) -> Result<LambdaReport> {
    compute_lambda_exhaustive_with_progress(n, enumerator, &|_| {})
}

pub fn compute_lambda_exhaustive_with_progress(
    n: usize,
    enumerator: &Enumerator,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<LambdaReport> {
    if n == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    if n > MAX_EXHAUSTIVE_LAMBDA_ORDER {
        return Err(Error::BoundExceeded {
            what: "order for exhaustive lambda",
            requested: n,
            limit: MAX_EXHAUSTIVE_LAMBDA_ORDER,
        });
    }
    let best = enumerator.fold(
        n,
        &AvoidanceSpec::default(),
        || None::<(usize, LatinSquare)>,
        |best, square| {
            let m = square.max_monotone();
            if best.as_ref().is_none_or(|(b, _)| m < *b) {
                *best = Some((m, square.clone()));
            }
        },
        |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        },
        progress,
    )?;
    let (value, witness) = best.expect("every order has a Latin square");
    Ok(LambdaReport {
        order: n,
        lower_bound: report_lower_bound(n),
        upper_bound: Some(value as u64),
        exact_value: Some(value as u64),
        witness: Some(witness),
        method: LambdaMethod::Exhaustive,
    })
}

/// Longest monotone line of `square`, an upper bound on Λ of its order.
pub fn lambda_witness_cap(square: &LatinSquare) -> u64 {
    square.max_monotone() as u64
}

/// The square whose `i`-th row is the first row shifted left by `i-1`.
pub fn circulant_square(first_row: &Permutation) -> Result<LatinSquare> {
    let n = first_row.len();
    LatinSquare::from_fn(n, |i, j| first_row.at((i + j - 2) % n + 1))
}

/// Longest monotone subsequence over every cyclic shift of `values`, which
/// is the max-monotone value of the corresponding circulant square.
fn circulant_cost(values: &[u32]) -> usize {
    let n = values.len();
    let mut doubled = values.to_vec();
    doubled.extend_from_slice(values);
    (0..n)
        .map(|s| longest_monotone(&doubled[s..s + n]))
        .max()
        .unwrap_or(0)
}

/// Largest order whose circulant first rows are searched exhaustively.
const CIRCULANT_SEARCH_LIMIT: usize = 8;

/// A good upper-bound witness of order `n`: the Connolly square when `n`
/// is a perfect square, else the best circulant found.
pub fn best_lambda_witness(n: usize) -> Result<LatinSquare> {
    if n == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut consider = |row: Vec<u32>| {
        let cost = circulant_cost(&row);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, row));
        }
    };
    if n <= CIRCULANT_SEARCH_LIMIT {
        // shifts of a first row give the same cost, so fix its first entry
        let mut rest: Vec<u32> = (2..=n as u32).collect();
        loop {
            let mut row = vec![1];
            row.extend_from_slice(&rest);
            consider(row);
            if !next_permutation(&mut rest) {
                break;
            }
        }
    } else {
        // multiplicative rows k·step mod (n+1)
        let modulus = n as u64 + 1;
        for step in 1..modulus {
            if gcd(step, modulus) == 1 {
                consider(
                    (1..=n as u64)
                        .map(|k| (k * step % modulus) as u32)
                        .collect(),
                );
            }
        }
        // layered rows: decreasing blocks of width `b`, blocks increasing
        for b in 1..=n {
            let row: Vec<u32> = (0..n)
                .step_by(b)
                .flat_map(|lo| (lo + 1..=(lo + b).min(n)).rev())
                .map(|v| v as u32)
                .collect();
            consider(row);
        }
    }
    let root = isqrt(n as u64) as usize;
    let (cost, row) = best.expect("at least one candidate");
    let circulant = circulant_square(&Permutation::new(row)?)?;
    if root * root == n {
        let connolly = connolly_square(root)?;
        if connolly.max_monotone() <= cost {
            return Ok(connolly);
        }
    }
    Ok(circulant)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Λ as an interval `[lower bound, witness cap]` without enumeration.
pub fn lambda_bounds(n: usize) -> Result<LambdaReport> {
    if n > crate::square::MAX_ORDER {
        return Ok(LambdaReport {
            order: n,
            lower_bound: report_lower_bound(n),
            upper_bound: None,
            exact_value: None,
            witness: None,
            method: LambdaMethod::BoundOnly,
        });
    }
    let witness = best_lambda_witness(n)?;
    let lower = report_lower_bound(n);
    let cap = lambda_witness_cap(&witness);
    debug_assert!(cap >= lower);
    Ok(LambdaReport {
        order: n,
        lower_bound: lower,
        upper_bound: Some(cap),
        exact_value: (cap == lower).then_some(cap),
        witness: Some(witness),
        method: LambdaMethod::WitnessCapped,
    })
}

/// The four lines anchored at extremal symbols: the row and column that
/// start with `n`, and the row and column that start with 1.
pub fn extremal_lines(square: &LatinSquare) -> [Vec<u8>; 4] {
    let n = square.order();
    let row_starting = |v: u8| -> Vec<u8> {
        let i = (1..=n).find(|&i| square.row(i)[0] == v).expect("Latin");
        square.row(i).to_vec()
    };
    let col_starting = |v: u8| -> Vec<u8> {
        let j = (1..=n)
            .find(|&j| square.get(1, j) == v as u32)
            .expect("Latin");
        square.column(j)
    };
    let top = n as u8;
    [
        row_starting(top),
        col_starting(top),
        row_starting(1),
        col_starting(1),
    ]
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `((n! - n) / n!)² · L_n` for avoiders of a pattern of length `n`,
/// evaluated exactly. Errors if the value is not an integer.
pub fn full_length_count(n: usize, latin_squares: &BigUint) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let total = factorial(n);
    let kept = &total - BigUint::from(n);
    let numerator = &kept * &kept * latin_squares;
    let denominator = &total * &total;
    if !(&numerator % &denominator).is_zero() {
        return Err(Error::Precondition(format!(
            "formula is not integral for n = {n} and L_n = {latin_squares}"
        )));
    }
    Ok(numerator / denominator)
}

/// `(n! - n) / n! · L_n`, the count of squares avoiding a length-`n`
/// pattern in the columns only.
pub fn column_full_length_count(n: usize, latin_squares: &BigUint) -> Result<BigUint> {
    let total = factorial(n);
    let numerator = (&total - BigUint::from(n)) * latin_squares;
    if !(&numerator % &total).is_zero() {
        return Err(Error::Precondition(format!(
            "column formula is not integral for n = {n}"
        )));
    }
    Ok(numerator / total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WilfMode {
    /// Enumerate every square once and test all patterns against it.
    SinglePass,
    /// One pruned search per pattern.
    PerPattern,
}

#[derive(Clone, Copy, Debug)]
pub struct WilfLimits {
    pub max_pattern_length: usize,
    pub max_order: usize,
}

impl Default for WilfLimits {
    fn default() -> Self {
        WilfLimits {
            max_pattern_length: 4,
            max_order: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WilfReport {
    pub pattern_length: usize,
    pub order: usize,
    /// Groups of patterns with equal counts, each listed lexicographically;
    /// groups are ordered by their first member.
    pub classes: Vec<Vec<Permutation>>,
    #[serde(serialize_with = "serialize_counts")]
    pub counts: BTreeMap<Permutation, BigUint>,
}

fn serialize_counts<S: serde::Serializer>(
    counts: &BTreeMap<Permutation, BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(counts.len()))?;
    for (k, v) in counts {
        map.serialize_entry(&k.to_compact_string(), &BigCount(v))?;
    }
    map.end()
}

struct BigCount<'a>(&'a BigUint);

impl Serialize for BigCount<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::bigcount::serialize(self.0, s)
    }
}

impl WilfReport {
    /// Groups `counts` by value.
    pub fn from_counts(
        pattern_length: usize,
        order: usize,
        counts: BTreeMap<Permutation, BigUint>,
    ) -> Self {
        let mut classes: Vec<Vec<Permutation>> = Vec::new();
        let mut class_of_count: BTreeMap<&BigUint, usize> = BTreeMap::new();
        for (pattern, count) in &counts {
            match class_of_count.get(count) {
                Some(&id) => classes[id].push(pattern.clone()),
                None => {
                    class_of_count.insert(count, classes.len());
                    classes.push(vec![pattern.clone()]);
                }
            }
        }
        WilfReport {
            pattern_length,
            order,
            classes,
            counts,
        }
    }

    /// 1-based class index of `pattern`.
    pub fn class_id(&self, pattern: &Permutation) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.contains(pattern))
            .map(|i| i + 1)
    }

    /// CSV with header `pattern,count,class_id`, one row per pattern in
    /// lexicographic order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pattern,count,class_id\n");
        for (pattern, count) in &self.counts {
            out.push_str(&format!(
                "{},{},{}\n",
                pattern.to_compact_string(),
                count,
                self.class_id(pattern).expect("classified")
            ));
        }
        out
    }
}

/// Lexicographic rank of the standardization of `values` among
/// permutations of its length.
fn pattern_rank(values: &[u8]) -> usize {
    let k = values.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller_after = values[i + 1..].iter().filter(|&&v| v < values[i]).count();
        rank = rank * (k - i) + smaller_after;
    }
    rank
}

/// Marks every length-`k` pattern occurring in `line`.
fn mark_patterns(line: &[u8], k: usize, seen: &mut [bool], buf: &mut Vec<u8>) {
    fn rec(line: &[u8], k: usize, start: usize, seen: &mut [bool], buf: &mut Vec<u8>) {
        if buf.len() == k {
            seen[pattern_rank(buf)] = true;
            return;
        }
        let need = k - buf.len();
        for i in start..=line.len() - need {
            buf.push(line[i]);
            rec(line, k, i + 1, seen, buf);
            buf.pop();
        }
    }
    if k <= line.len() {
        rec(line, k, 0, seen, buf);
    }
}

/// Counts, for every pattern of length `k`, the order-`n` squares whose
/// rows and columns avoid it, and groups patterns by count.
pub fn wilf_classes(
    k: usize,
    n: usize,
    mode: WilfMode,
    limits: WilfLimits,
    enumerator: &Enumerator,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<WilfReport> {
    if k == 0 || n == 0 {
        return Err(Error::Precondition(
            "pattern length and order must be positive".into(),
        ));
    }
    if k > limits.max_pattern_length {
        return Err(Error::BoundExceeded {
            what: "pattern length",
            requested: k,
            limit: limits.max_pattern_length,
        });
    }
    if n > limits.max_order {
        return Err(Error::BoundExceeded {
            what: "order",
            requested: n,
            limit: limits.max_order,
        });
    }
    let patterns = all_permutations(k);
    let counts: Vec<u64> = match mode {
        WilfMode::PerPattern => {
            let mut out = Vec::with_capacity(patterns.len());
            for p in &patterns {
                let r = enumerator.count(n, &AvoidanceSpec::rows_and_cols(p.clone()))?;
                out.push(u64::try_from(&r.count).expect("desk-scale count"));
            }
            out
        }
        WilfMode::SinglePass => enumerator.fold(
            n,
            &AvoidanceSpec::default(),
            || vec![0u64; patterns.len()],
            |tally, square| {
                let mut seen = vec![false; patterns.len()];
                let mut buf = Vec::with_capacity(k);
                for i in 1..=n {
                    mark_patterns(square.row(i), k, &mut seen, &mut buf);
                    mark_patterns(&square.column(i), k, &mut seen, &mut buf);
                }
                for (t, s) in tally.iter_mut().zip(&seen) {
                    if !s {
                        *t += 1;
                    }
                }
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
            progress,
        )?,
    };
    let counts = patterns
        .into_iter()
        .zip(counts)
        .map(|(p, c)| (p, BigUint::from(c)))
        .collect();
    Ok(WilfReport::from_counts(k, n, counts))
}

/// The orbit of `pattern` under reverse and complement.
pub fn symmetry_orbit(pattern: &Permutation) -> Vec<Permutation> {
    let mut orbit = vec![
        pattern.clone(),
        pattern.reverse(),
        pattern.complement(),
        pattern.reverse().complement(),
    ];
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Orbits of all length-`k` patterns under reverse and complement, each
/// sorted, ordered by first member.
pub fn symmetry_orbits(k: usize) -> Vec<Vec<Permutation>> {
    let mut orbits: Vec<Vec<Permutation>> =
        all_permutations(k).iter().map(symmetry_orbit).collect();
    orbits.sort();
    orbits.dedup();
    orbits
}

#[derive(Clone, Debug, Serialize)]
pub struct FullLengthRow {
    pub pattern: Permutation,
    #[serde(with = "crate::bigcount")]
    pub column_avoiders: BigUint,
    #[serde(with = "crate::bigcount")]
    pub column_predicted: BigUint,
    #[serde(with = "crate::bigcount")]
    pub avoiders: BigUint,
    #[serde(with = "crate::bigcount")]
    pub predicted: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullLengthReport {
    pub order: usize,
    #[serde(with = "crate::bigcount")]
    pub latin_squares: BigUint,
    pub rows: Vec<FullLengthRow>,
    /// Whether relabeling by `ρ∘π⁻¹` maps the π-avoiders exactly onto the
    /// ρ-avoiders, for the first two sampled patterns; `None` above order 4.
    pub relabel_bijection: Option<bool>,
    pub holds: bool,
}

/// Default patterns checked by [`verify_theorem6`]: all of `S_n` up to
/// order 4, otherwise the identity, its reverse, and the patterns at a few
/// fixed lexicographic positions.
pub fn full_length_sample(n: usize) -> Vec<Permutation> {
    let all = all_permutations(n);
    if n <= 4 {
        return all;
    }
    let len = all.len();
    let mut picks: Vec<Permutation> = [0, len / 3, len / 2, 2 * len / 3, len - 1]
        .into_iter()
        .map(|i| all[i].clone())
        .collect();
    picks.dedup();
    picks
}

/// Checks by enumeration that column avoiders and full avoiders of each
/// sampled length-`n` pattern match the two counting formulas.
pub fn verify_theorem6(
    n: usize,
    sample: &[Permutation],
    enumerator: &Enumerator,
) -> Result<FullLengthReport> {
    if n > MAX_EXHAUSTIVE_LAMBDA_ORDER {
        return Err(Error::BoundExceeded {
            what: "order",
            requested: n,
            limit: MAX_EXHAUSTIVE_LAMBDA_ORDER,
        });
    }
    if let Some(p) = sample.iter().find(|p| p.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let latin = enumerator.count(n, &AvoidanceSpec::default())?.count;
    let column_predicted = column_full_length_count(n, &latin)?;
    let predicted = full_length_count(n, &latin)?;
    let mut rows = Vec::with_capacity(sample.len());
    for pattern in sample {
        let cols = enumerator
            .count(n, &AvoidanceSpec::cols_only([pattern.clone()]))?
            .count;
        let both = enumerator
            .count(n, &AvoidanceSpec::rows_and_cols(pattern.clone()))?
            .count;
        rows.push(FullLengthRow {
            pattern: pattern.clone(),
            column_avoiders: cols,
            column_predicted: column_predicted.clone(),
            avoiders: both,
            predicted: predicted.clone(),
        });
    }
    let relabel_bijection = match sample {
        [source, target, ..] if n <= 4 => {
            let mut mapped: Vec<LatinSquare> = enumerator
                .collect(n, &AvoidanceSpec::rows_and_cols(source.clone()))?
                .iter()
                .map(|s| relabel_map(s, source, target))
                .collect::<Result<_>>()?;
            mapped.sort();
            let expected = enumerator.collect(n, &AvoidanceSpec::rows_and_cols(target.clone()))?;
            Some(mapped == expected)
        }
        _ => None,
    };
    let holds = rows
        .iter()
        .all(|r| r.column_avoiders == r.column_predicted && r.avoiders == r.predicted)
        && relabel_bijection != Some(false);
    Ok(FullLengthReport {
        order: n,
        latin_squares: latin,
        rows,
        relabel_bijection,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub order: usize,
    pub squares_checked: u64,
    pub failures: u64,
    /// First failing square in enumeration order, if any.
    pub counterexample: Option<LatinSquare>,
    pub holds: bool,
}

fn check_every_square(
    check: &'static str,
    n: usize,
    spec: &AvoidanceSpec,
    enumerator: &Enumerator,
    predicate: impl Fn(&LatinSquare) -> bool + Sync,
) -> Result<CheckReport> {
    let (checked, failures, counterexample) = enumerator.fold(
        n,
        spec,
        || (0u64, 0u64, None::<LatinSquare>),
        |acc, square| {
            acc.0 += 1;
            if !predicate(square) {
                acc.1 += 1;
                if acc.2.is_none() {
                    acc.2 = Some(square.clone());
                }
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2.or(b.2)),
        &|_| {},
    )?;
    Ok(CheckReport {
        check,
        order: n,
        squares_checked: checked,
        failures,
        counterexample,
        holds: failures == 0,
    })
}

/// Every square contains all of {123, 231, 312} or none of them, and
/// likewise for {132, 213, 321}.
pub fn verify_corollary6(n: usize, enumerator: &Enumerator) -> Result<CheckReport> {
    let triples: Vec<Vec<AvoidanceSpec>> = [["123", "231", "312"], ["132", "213", "321"]]
        .iter()
        .map(|t| {
            t.iter()
                .map(|s| AvoidanceSpec::rows_and_cols(s.parse().expect("literal")))
                .collect()
        })
        .collect();
    check_every_square(
        "corollary6",
        n,
        &AvoidanceSpec::default(),
        enumerator,
        |square| {
            triples.iter().all(|triple| {
                let first = square.avoids_spec(&triple[0]);
                triple[1..].iter().all(|s| square.avoids_spec(s) == first)
            })
        },
    )
}

/// Each avoider of an even length-3 pattern has every column cyclically
/// decreasing going down, each avoider of an odd one cyclically
/// increasing; and the avoiders are exactly the closed-form squares.
pub fn verify_remark4(n: usize, enumerator: &Enumerator) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for pattern in all_permutations(3) {
        let step: i64 = if pattern.is_even() { -1 } else { 1 };
        let spec = AvoidanceSpec::rows_and_cols(pattern.clone());
        let mut report = check_every_square("remark4", n, &spec, enumerator, |square| {
            (1..=n).all(|j| {
                let col = square.column(j);
                col.windows(2)
                    .all(|w| (w[0] as i64 - 1 + step).rem_euclid(n as i64) + 1 == w[1] as i64)
            })
        })?;
        let mut expected = all_s3_avoiders(n, &pattern)?;
        expected.sort();
        let found = enumerator.collect(n, &spec)?;
        if found != expected {
            report.failures += 1;
            report.holds = false;
        }
        reports.push(report);
    }
    Ok(reports)
}

#[derive(Clone, Debug, Serialize)]
pub struct ErdosSzekeresReport {
    pub p: usize,
    pub q: usize,
    pub permutations_checked: u64,
    pub holds: bool,
    /// Every square of order `n` checked for the four extremal-anchor lines.
    pub four_witness: Option<CheckReport>,
}

/// Checks the Erdős–Szekeres guarantee over all of `S_{pq+1}`, and, when
/// `order` is given, that in every square of that order each of the four
/// extremal-anchor lines has a monotone subsequence of length
/// [`lambda_lower_bound`].
pub fn verify_erdos_szekeres(
    p: usize,
    q: usize,
    order: Option<usize>,
    enumerator: &Enumerator,
) -> Result<ErdosSzekeresReport> {
    let m = p * q + 1;
    if m > crate::perm::MAX_BRUTE_FORCE_LENGTH {
        return Err(Error::BoundExceeded {
            what: "permutation length",
            requested: m,
            limit: crate::perm::MAX_BRUTE_FORCE_LENGTH,
        });
    }
    let mut checked = 0u64;
    let mut holds = true;
    for perm in all_permutations(m) {
        checked += 1;
        holds &= check_erdos_szekeres(&perm, p, q)?;
    }
    let four_witness = match order {
        Some(n) if n >= 2 => {
            let need = lambda_lower_bound(n as u64)? as usize;
            Some(check_every_square(
                "four-witness",
                n,
                &AvoidanceSpec::default(),
                enumerator,
                |square| {
                    extremal_lines(square)
                        .iter()
                        .all(|line| longest_monotone(line) >= need)
                },
            )?)
        }
        _ => None,
    };
    Ok(ErdosSzekeresReport {
        p,
        q,
        permutations_checked: checked,
        holds: holds && four_witness.as_ref().is_none_or(|r| r.holds),
        four_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lambda_lower_bound(2).unwrap(), 2);
        assert_eq!(lambda_lower_bound(3).unwrap(), 2);
        assert_eq!(lambda_lower_bound(4).unwrap(), 3);
        assert_eq!(lambda_lower_bound(9).unwrap(), 4);
        assert!(lambda_lower_bound(1).is_err());
        assert!(lambda_lower_bound_closed_form(1).is_err());
    }

    #[test]
    fn full_length_formula() {
        assert_eq!(
            full_length_count(4, &BigUint::from(576u32)).unwrap(),
            BigUint::from(400u32)
        );
        assert_eq!(
            full_length_count(1, &BigUint::from(1u32)).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            full_length_count(5, &BigUint::from(161280u32)).unwrap(),
            BigUint::from(148120u32)
        );
        assert_eq!(
            column_full_length_count(4, &BigUint::from(576u32)).unwrap(),
            BigUint::from(480u32)
        );
        assert!(full_length_count(4, &BigUint::from(1u32)).is_err());
    }

    #[test]
    fn rank_matches_lexicographic_order() {
        for (i, p) in all_permutations(4).iter().enumerate() {
            let bytes: Vec<u8> = p.entries().iter().map(|&v| v as u8 * 3).collect();
            assert_eq!(pattern_rank(&bytes), i);
        }
    }

    #[test]
    fn orbits_of_s4() {
        let orbits = symmetry_orbits(4);
        assert_eq!(orbits.len(), 8);
        assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), 24);
    }

    #[test]
    fn small_wilf() {
        let e = Enumerator::new();
        let r = wilf_classes(
            1,
            3,
            WilfMode::SinglePass,
            WilfLimits::default(),
            &e,
            &|_| {},
        )
        .unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.counts.values().next().unwrap(), &BigUint::zero());
        let r = wilf_classes(
            3,
            4,
            WilfMode::SinglePass,
            WilfLimits::default(),
            &e,
            &|_| {},
        )
        .unwrap();
        assert_eq!(r.classes.len(), 1);
        assert!(r.counts.values().all(|c| c == &BigUint::from(4u8)));
        assert!(r.to_csv().starts_with("pattern,count,class_id\n123,4,1\n"));
        assert!(matches!(
            wilf_classes(
                5,
                5,
                WilfMode::SinglePass,
                WilfLimits::default(),
                &e,
                &|_| {}
            ),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn circulant_witness_small() {
        let w = best_lambda_witness(4).unwrap();
        assert_eq!(w.max_monotone(), 3);
        let r = lambda_bounds(9).unwrap();
        assert_eq!(
            (r.lower_bound, r.upper_bound, r.exact_value),
            (4, Some(4), Some(4))
        );
    }

    #[test]
    fn exhaustive_bound_refused() {
        assert!(matches!(
            compute_lambda_exhaustive(6, &Enumerator::new()),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
