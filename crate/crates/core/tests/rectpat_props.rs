use latinpat::construct::all_s3_avoiders;
use latinpat::perm::all_permutations;
use latinpat::rectpat::{contains_rectangle, rect_order_isomorphic, LatinRectangle};
use latinpat::{AvoidanceSpec, Enumerator, Permutation};
use proptest::prelude::*;

fn sub_rectangle(s: &latinpat::LatinSquare, rows: &[usize], cols: &[usize]) -> LatinRectangle {
    let grid: Vec<Vec<u32>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| s.get(r, c)).collect())
        .collect();
    LatinRectangle::new(&grid, Some(s.order() as u32)).unwrap()
}

#[test]
fn line_patterns_reduce_to_permutation_containment() {
    let e = Enumerator::new();
    for n in 1..=4 {
        let all = e.collect(n, &AvoidanceSpec::default()).unwrap();
        for k in 1..=n.min(4) {
            for pi in all_permutations(k) {
                let row_rect = LatinRectangle::from_row(pi.entries()).unwrap();
                let col_rect = row_rect.rotate_90();
                for s in &all {
                    let in_rows = s.row_permutations().iter().any(|r| r.contains(&pi));
                    let in_cols = s.column_permutations().iter().any(|c| c.contains(&pi));
                    assert_eq!(contains_rectangle(s, &row_rect).unwrap().is_some(), in_rows);
                    assert_eq!(contains_rectangle(s, &col_rect).unwrap().is_some(), in_cols);
                }
            }
        }
    }
}

#[test]
fn avoiding_row_and_rotated_123_is_avoiding_123() {
    let e = Enumerator::new();
    let r = LatinRectangle::from_row(&[1, 2, 3]).unwrap();
    let rotated = r.rotate_90();
    let pi: Permutation = "123".parse().unwrap();
    for n in 1..=5 {
        let mut found: Vec<_> = e
            .collect(n, &AvoidanceSpec::default())
            .unwrap()
            .into_iter()
            .filter(|s| {
                n < 3
                    || (contains_rectangle(s, &r).unwrap().is_none()
                        && contains_rectangle(s, &rotated).unwrap().is_none())
            })
            .collect();
        found.sort();
        assert_eq!(found.len(), n);
        let mut expected = all_s3_avoiders(n, &pi).unwrap();
        expected.sort();
        assert_eq!(found, expected);
    }
}

#[test]
fn witnesses_reverify() {
    let all = Enumerator::new()
        .collect(5, &AvoidanceSpec::default())
        .unwrap();
    let patterns = [
        vec![vec![1, 2], vec![2, 1]],
        vec![vec![3, 4, 2], vec![1, 3, 4]],
        vec![vec![1, 2, 3], vec![3, 1, 2]],
        vec![vec![2, 1], vec![3, 2], vec![1, 3]],
    ];
    for grid in patterns {
        let pat = LatinRectangle::new(&grid, None).unwrap();
        for s in all.iter().step_by(97) {
            if let Some(w) = contains_rectangle(s, &pat).unwrap() {
                assert!(w.rows.windows(2).all(|x| x[0] < x[1]));
                assert!(w.cols.windows(2).all(|x| x[0] < x[1]));
                assert!(rect_order_isomorphic(
                    &sub_rectangle(s, &w.rows, &w.cols),
                    &pat
                ));
            }
        }
    }
}

fn arb_rect() -> impl Strategy<Value = LatinRectangle> {
    // rows of a random order-6 cyclic shift pattern, so no repeats in rows or columns
    (
        1usize..=3,
        1usize..=3,
        Just((1..=6u32).collect::<Vec<_>>()).prop_shuffle(),
        0usize..6,
    )
        .prop_map(|(p, q, perm, shift)| {
            let grid: Vec<Vec<u32>> = (0..p)
                .map(|i| (0..q).map(|j| perm[(i + j + shift) % 6]).collect())
                .collect();
            LatinRectangle::new(&grid, Some(6)).unwrap()
        })
}

proptest! {
    #[test]
    fn isomorphism_is_an_equivalence(a in arb_rect(), b in arb_rect(), c in arb_rect()) {
        prop_assert!(rect_order_isomorphic(&a, &a));
        prop_assert_eq!(rect_order_isomorphic(&a, &b), rect_order_isomorphic(&b, &a));
        if rect_order_isomorphic(&a, &b) && rect_order_isomorphic(&b, &c) {
            prop_assert!(rect_order_isomorphic(&a, &c));
        }
    }

    #[test]
    fn increasing_maps_preserve_isomorphism(a in arb_rect(), gap in 1u32..5) {
        let spread: Vec<Vec<u32>> = a
            .grid_rows()
            .iter()
            .map(|r| r.iter().map(|v| v * gap + 1).collect())
            .collect();
        let b = LatinRectangle::new(&spread, None).unwrap();
        prop_assert!(rect_order_isomorphic(&a, &b));
    }

    #[test]
    fn quarter_turns(a in arb_rect()) {
        let t = a.rotate_90();
        prop_assert_eq!((t.rows(), t.cols()), (a.cols(), a.rows()));
        prop_assert_eq!(t.rotate_90().rotate_90().rotate_90(), a);
    }
}
