mod common;

use common::*;
use latinpat::analysis::*;
use latinpat::construct::connolly_square;
use latinpat::perm::all_permutations;
use latinpat::{AvoidanceSpec, Enumerator, LatinSquare, Permutation};
use num_bigint::BigUint;

fn oracle_lambda(n: usize) -> usize {
    naive_latin_squares(n)
        .iter()
        .map(|rows| {
            rows.iter()
                .chain(columns(rows).iter())
                .map(|l| naive_longest_monotone(l))
                .max()
                .unwrap()
        })
        .min()
        .unwrap()
}

#[test]
fn lower_bound_matches_closed_form() {
    for n in 2..=1_000_000u64 {
        assert_eq!(
            lambda_lower_bound(n).unwrap(),
            lambda_lower_bound_closed_form(n).unwrap(),
            "n={n}"
        );
    }
    // the defining inequality, checked directly
    for n in 2..=500u64 {
        let m = lambda_lower_bound(n).unwrap();
        assert!((m - 1) * (m - 2) + 2 <= n);
        assert!(m * (m - 1) + 2 > n);
    }
}

#[test]
fn exhaustive_lambda_matches_oracle() {
    let e = Enumerator::new();
    for n in 1..=5 {
        let report = compute_lambda_exhaustive(n, &e).unwrap();
        assert_eq!(report.exact_value, Some(oracle_lambda(n) as u64), "n={n}");
        let w = report.witness.unwrap();
        assert_eq!(w.max_monotone() as u64, report.exact_value.unwrap());
        assert!(report.lower_bound <= report.exact_value.unwrap());
    }
    let three = compute_lambda_exhaustive(3, &e).unwrap();
    assert!(three.lower_bound < three.exact_value.unwrap());
    let four = compute_lambda_exhaustive(4, &e).unwrap();
    assert_eq!(four.lower_bound, four.exact_value.unwrap());
    assert_eq!(
        compute_lambda_exhaustive(5, &e)
            .unwrap()
            .witness
            .unwrap()
            .rows(),
        vec![
            vec![1, 2, 5, 4, 3],
            vec![3, 1, 4, 5, 2],
            vec![5, 3, 1, 2, 4],
            vec![4, 5, 2, 3, 1],
            vec![2, 4, 3, 1, 5],
        ]
    );
    assert!(compute_lambda_exhaustive(6, &e).is_err());
}

#[test]
fn exhaustive_witness_is_lexicographically_first() {
    for n in 2..=4 {
        let target = oracle_lambda(n);
        let first = naive_latin_squares(n)
            .into_iter()
            .find(|rows| {
                rows.iter()
                    .chain(columns(rows).iter())
                    .all(|l| naive_longest_monotone(l) <= target)
            })
            .unwrap();
        let report = compute_lambda_exhaustive(n, &Enumerator::new()).unwrap();
        assert_eq!(report.witness.unwrap().rows(), first);
    }
}

#[test]
fn four_witness_lines() {
    let e = Enumerator::new();
    for n in 2..=5 {
        let need = lambda_lower_bound(n as u64).unwrap() as usize;
        for rows in naive_latin_squares(n)
            .iter()
            .step_by(if n == 5 { 7 } else { 1 })
        {
            let s = LatinSquare::from_rows(rows).unwrap();
            let lines = extremal_lines(&s);
            for line in &lines {
                let as_u32: Vec<u32> = line.iter().map(|&v| v as u32).collect();
                assert!(naive_longest_monotone(&as_u32) >= need);
            }
            // the anchor lines are the rows and columns holding 1 and n in the corner positions
            let cols = columns(rows);
            for line in &lines {
                let as_u32: Vec<u32> = line.iter().map(|&v| v as u32).collect();
                assert!(rows.contains(&as_u32) || cols.contains(&as_u32));
            }
        }
        let report = verify_erdos_szekeres(1, 2, Some(n), &e).unwrap();
        assert!(report.holds);
    }
}

#[test]
fn erdos_szekeres_exhaustive() {
    let e = Enumerator::new();
    for (p, q) in [(1, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let r = verify_erdos_szekeres(p, q, None, &e).unwrap();
        assert!(r.holds);
        assert_eq!(r.permutations_checked, factorial((p * q + 1) as u64));
    }
    assert!(verify_erdos_szekeres(3, 4, None, &e).is_err());
}

#[test]
fn full_length_formula_matches_enumeration() {
    let e = Enumerator::new();
    for n in 3..=5 {
        let total = BigUint::from(naive_latin_squares(n).len());
        let both = full_length_count(n, &total).unwrap();
        let cols = column_full_length_count(n, &total).unwrap();
        let sample: Vec<Permutation> = if n == 5 {
            full_length_sample(5)
        } else {
            all_permutations(n)
        };
        for pi in sample {
            assert_eq!(
                e.count(n, &AvoidanceSpec::rows_and_cols(pi.clone()))
                    .unwrap()
                    .count,
                both
            );
            assert_eq!(
                e.count(n, &AvoidanceSpec::cols_only([pi])).unwrap().count,
                cols
            );
        }
    }
    let report = verify_theorem6(4, &full_length_sample(4), &e).unwrap();
    assert!(report.holds);
    assert_eq!(report.relabel_bijection, Some(true));
}

#[test]
fn wilf_modes_agree() {
    let e = Enumerator::new();
    for (k, n) in [(3, 3), (3, 4), (4, 4), (3, 5)] {
        let a = wilf_classes(
            k,
            n,
            WilfMode::SinglePass,
            WilfLimits::default(),
            &e,
            &|_| {},
        )
        .unwrap();
        let b = wilf_classes(
            k,
            n,
            WilfMode::PerPattern,
            WilfLimits::default(),
            &e,
            &|_| {},
        )
        .unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.classes, b.classes);
        assert_eq!(a.to_csv(), b.to_csv());
    }
}

#[test]
fn wilf_counts_match_naive_filter() {
    let squares = naive_latin_squares(4);
    let report = wilf_classes(
        4,
        4,
        WilfMode::SinglePass,
        WilfLimits::default(),
        &Enumerator::new(),
        &|_| {},
    )
    .unwrap();
    for (pi, count) in &report.counts {
        let expected = squares
            .iter()
            .filter(|rows| {
                let p = vec![pi.entries().to_vec()];
                naive_avoids(rows, &p, &p, &[])
            })
            .count();
        assert_eq!(*count, BigUint::from(expected), "{pi:?}");
    }
    // classes are unions of symmetry orbits
    for orbit in symmetry_orbits(4) {
        let ids: Vec<_> = orbit.iter().map(|p| report.class_id(p)).collect();
        assert!(ids.iter().all(|id| *id == ids[0]));
    }
}

#[test]
fn s3_classes_collapse() {
    let e = Enumerator::new();
    for n in 1..=6 {
        let r = wilf_classes(
            3,
            n,
            WilfMode::PerPattern,
            WilfLimits {
                max_pattern_length: 4,
                max_order: 6,
            },
            &e,
            &|_| {},
        )
        .unwrap();
        assert_eq!(r.classes.len(), 1);
        assert!(r.counts.values().all(|c| *c == BigUint::from(n)));
    }
}

#[test]
fn witness_caps() {
    assert_eq!(lambda_witness_cap(&connolly_square(3).unwrap()), 4);
    assert_eq!(lambda_witness_cap(&connolly_square(4).unwrap()), 5);
    for n in 2..=12 {
        let r = lambda_bounds(n).unwrap();
        let w = r.witness.clone().unwrap();
        assert_eq!(w.order(), n);
        assert_eq!(r.upper_bound, Some(w.max_monotone() as u64));
        assert!(r.lower_bound <= r.upper_bound.unwrap());
    }
    let nine = lambda_bounds(9).unwrap();
    assert_eq!(
        (nine.lower_bound, nine.upper_bound, nine.exact_value),
        (4, Some(4), Some(4))
    );
}

#[test]
fn structural_checks_hold() {
    let e = Enumerator::new();
    for n in 1..=5 {
        assert!(verify_corollary6(n, &e).unwrap().holds);
        assert!(verify_remark4(n, &e).unwrap().iter().all(|r| r.holds));
    }
}
