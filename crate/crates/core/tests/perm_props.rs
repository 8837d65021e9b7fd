mod common;

use common::*;
use latinpat::perm::{
    all_permutations, check_erdos_szekeres, count_avoiding_permutations, erdos_szekeres_lambda,
    isqrt, longest_monotone, CompiledPattern,
};
use latinpat::Permutation;
use proptest::prelude::*;

fn perm(v: Vec<u32>) -> Permutation {
    Permutation::new(v).unwrap()
}

fn arb_perm(max_len: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_len)
        .prop_flat_map(|m| Just((1..=m as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(perm)
}

#[test]
fn containment_matches_naive_oracle_exhaustively() {
    let patterns: Vec<Vec<u32>> = (1..=4).flat_map(all_perms).collect();
    for len in 1..=7 {
        for host in all_perms(len) {
            let h = perm(host.clone());
            for p in &patterns {
                assert_eq!(
                    h.contains(&perm(p.clone())),
                    naive_contains(&host, p),
                    "host {host:?} pattern {p:?}"
                );
            }
        }
    }
}

#[test]
fn first_occurrence_matches_naive_oracle() {
    for len in 1..=6 {
        for host in all_permutations(len) {
            for k in 1..=4 {
                for pi in all_permutations(k) {
                    assert_eq!(
                        CompiledPattern::new(&pi).first_occurrence(host.entries()),
                        naive_first_occurrence(host.entries(), pi.entries()),
                        "{pi:?} in {host:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn catalan_counts_for_length_three() {
    for m in 1..=9u64 {
        let expected = catalan(m);
        for p in all_permutations(3) {
            assert_eq!(
                count_avoiding_permutations(m as usize, &p).unwrap(),
                expected
            );
        }
    }
    let firsts: Vec<u64> = (1..=6)
        .map(|m| count_avoiding_permutations(m, &"123".parse().unwrap()).unwrap())
        .collect();
    assert_eq!(firsts, [1, 2, 5, 14, 42, 132]);
}

#[test]
fn count_avoiding_matches_naive_filter() {
    for p in all_permutations(4) {
        let naive = all_perms(6)
            .iter()
            .filter(|h| !naive_contains(h, p.entries()))
            .count() as u64;
        assert_eq!(count_avoiding_permutations(6, &p).unwrap(), naive);
    }
    assert_eq!(
        count_avoiding_permutations(4, &"1".parse().unwrap()).unwrap(),
        0
    );
}

#[test]
fn longest_monotone_matches_subset_search() {
    for len in 1..=8 {
        for host in all_perms(len) {
            assert_eq!(longest_monotone(&host), naive_longest_monotone(&host));
        }
    }
}

#[test]
fn erdos_szekeres_exhaustive() {
    for (p, q) in [
        (1, 1),
        (1, 2),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 2),
        (1, 6),
        (6, 1),
    ] {
        for host in all_permutations(p * q + 1) {
            assert!(check_erdos_szekeres(&host, p, q).unwrap());
        }
    }
    for p in [1, 2, 3] {
        for q in [1, 2] {
            assert!(check_erdos_szekeres(&Permutation::identity(p * q + 1), p, q).unwrap());
        }
    }
}

#[test]
fn monotone_at_least_lambda_exhaustively() {
    for len in 1..=7 {
        let lambda = erdos_szekeres_lambda(len as u64) as usize;
        let mut tight = false;
        for host in all_permutations(len) {
            let m = host.longest_monotone();
            assert!(m >= lambda);
            tight |= m == lambda;
        }
        // the bound is attained
        assert!(tight, "len {len}");
    }
}

#[test]
fn lambda_uses_exact_root() {
    for n in 1..=100_000u64 {
        let r = isqrt(n - 1);
        assert!(r * r < n && (r + 1) * (r + 1) > n - 1);
        assert_eq!(erdos_szekeres_lambda(n), r + 1);
    }
    for k in [1u64 << 26, 3_037_000_499] {
        assert_eq!(erdos_szekeres_lambda(k * k + 1), k + 1);
        assert_eq!(erdos_szekeres_lambda(k * k), k);
    }
}

proptest! {
    #[test]
    fn symmetries_preserve_containment(host in arb_perm(9), pat in arb_perm(4)) {
        let c = host.contains(&pat);
        prop_assert_eq!(c, host.reverse().contains(&pat.reverse()));
        prop_assert_eq!(c, host.complement().contains(&pat.complement()));
        prop_assert_eq!(c, host.inverse().contains(&pat.inverse()));
    }

    #[test]
    fn group_laws(a in arb_perm(8)) {
        let id = Permutation::identity(a.len());
        prop_assert_eq!(a.inverse().compose(&a).unwrap(), id.clone());
        prop_assert_eq!(a.compose(&a.inverse()).unwrap(), id.clone());
        prop_assert_eq!(id.compose(&a).unwrap(), a.clone());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.reverse().reverse(), a.clone());
        prop_assert!(a.contains(&Permutation::identity(1)));
    }

    #[test]
    fn direct_sum_blocks(a in arb_perm(5), b in arb_perm(5)) {
        let s = a.direct_sum(&b);
        prop_assert_eq!(s.len(), a.len() + b.len());
        prop_assert_eq!(&s.entries()[..a.len()], a.entries());
        prop_assert!(s.entries()[a.len()..].iter().zip(b.entries()).all(|(x, y)| *x == y + a.len() as u32));
    }

    #[test]
    fn text_round_trip(a in arb_perm(14)) {
        prop_assert_eq!(a.to_string().parse::<Permutation>().unwrap(), a.clone());
        prop_assert_eq!(a.to_compact_string().parse::<Permutation>().unwrap(), a);
    }
}
