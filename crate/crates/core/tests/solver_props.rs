use discrepancy_core::bounds::{check_binet_cauchy, detlb_certificate, verify_certificate, CertStrategy};
use discrepancy_core::det::{det_exact, det_sign_matrix};
use discrepancy_core::exact::{disc_exact, herdisc_exact};
use discrepancy_core::generators::gen_characters;
use discrepancy_core::system::eval_discrepancy;
use discrepancy_core::{BitSet, Coloring, SignMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = SignMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(m, n)| {
        prop::collection::vec(-1i8..=1, m * n).prop_map(move |e| SignMatrix::new(m, n, e).unwrap())
    })
}

fn coloring_from_mask(n: usize, mask: u64) -> Coloring {
    Coloring::new((0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect()).unwrap()
}

fn brute_disc(m: &SignMatrix) -> u64 {
    (0u64..1 << m.cols())
        .map(|mask| eval_discrepancy(m, &coloring_from_mask(m.cols(), mask)).unwrap().value)
        .min()
        .unwrap()
}

fn brute_herdisc(m: &SignMatrix) -> u64 {
    let n = m.cols();
    (0u64..1 << n)
        .map(|mask| brute_disc(&m.restrict_columns(&BitSet::from_mask(n, mask)).unwrap()))
        .max()
        .unwrap()
}

/// Leibniz expansion over all permutations.
fn leibniz(a: &[Vec<i64>]) -> i64 {
    fn go(a: &[Vec<i64>], row: usize, used: &mut Vec<bool>, sign: i64) -> i64 {
        if row == a.len() {
            return sign;
        }
        let mut total = 0;
        for c in 0..a.len() {
            if used[c] || a[row][c] == 0 {
                continue;
            }
            let inversions = used[c + 1..].iter().filter(|&&u| u).count() as i64;
            used[c] = true;
            total += a[row][c] * go(a, row + 1, used, if inversions % 2 == 0 { sign } else { -sign });
            used[c] = false;
        }
        total
    }
    go(a, 0, &mut vec![false; a.len()], 1)
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(prop::sample::select(vec![-1i64, 1]), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_and_bound_matches_brute_force(m in arb_matrix(6, 12)) {
        let r = disc_exact(&m).unwrap();
        prop_assert_eq!(r.value, brute_disc(&m));
        prop_assert_eq!(eval_discrepancy(&m, r.coloring().unwrap()).unwrap().value, r.value);
    }

    #[test]
    fn herdisc_matches_brute_force(m in arb_matrix(5, 7)) {
        let h = herdisc_exact(&m, 16).unwrap();
        prop_assert_eq!(h.value, brute_herdisc(&m));
        let w = h.subset().unwrap();
        prop_assert_eq!(brute_disc(&m.restrict_columns(w).unwrap()), h.value);
        prop_assert!(disc_exact(&m).unwrap().value <= h.value);
    }

    #[test]
    fn herdisc_is_monotone(m in arb_matrix(5, 8), mask in any::<u64>()) {
        let n = m.cols();
        let keep = BitSet::from_mask(n, mask & ((1 << n) - 1));
        let sub = m.restrict_columns(&keep).unwrap();
        prop_assert!(herdisc_exact(&sub, 16).unwrap().value <= herdisc_exact(&m, 16).unwrap().value);
    }

    #[test]
    fn det_matches_leibniz(a in (1usize..=6).prop_flat_map(square)) {
        prop_assert_eq!(det_exact(&a).unwrap(), BigInt::from(leibniz(&a)));
    }

    #[test]
    fn det_swap_and_transpose((a, i, j) in (2usize..=8).prop_flat_map(|n| (square(n), 0..n, 0..n))) {
        prop_assume!(i != j);
        let d = det_exact(&a).unwrap();
        let mut swapped = a.clone();
        swapped.swap(i, j);
        prop_assert_eq!(det_exact(&swapped).unwrap(), -d.clone());
        let n = a.len();
        let t: Vec<Vec<i64>> = (0..n).map(|c| (0..n).map(|r| a[r][c]).collect()).collect();
        prop_assert_eq!(det_exact(&t).unwrap(), d);
    }

    #[test]
    fn certificates_are_sound_and_verify(m in arb_matrix(5, 7), seed in any::<u64>()) {
        let kmax = m.rows().min(m.cols());
        let h = herdisc_exact(&m, 16).unwrap().value as f64;
        for strategy in [CertStrategy::Exhaustive, CertStrategy::Greedy { restarts: 3 }] {
            let cert = detlb_certificate(&m, kmax, strategy, seed).unwrap();
            prop_assert!(cert.bound <= h + 1e-9);
            prop_assert!(verify_certificate(&m, &cert).unwrap().passed);
        }
    }
}

#[test]
fn exhaustive_certificate_dominates_greedy() {
    let mut rng = discrepancy_core::rng::SplitMix64::new(5);
    for _ in 0..50 {
        let entries: Vec<i8> = (0..36).map(|_| rng.sign()).collect();
        let m = SignMatrix::new(6, 6, entries).unwrap();
        let ex = detlb_certificate(&m, 6, CertStrategy::Exhaustive, 0).unwrap();
        let gr = detlb_certificate(&m, 6, CertStrategy::Greedy { restarts: 4 }, 9).unwrap();
        assert!(gr.bound <= ex.bound);
    }
}

#[test]
fn binet_cauchy_small_characters() {
    for d in 1..=4 {
        for k in 0..=1 {
            let r = check_binet_cauchy(&gen_characters(d, k).unwrap()).unwrap();
            assert!(r.passed, "d={d} k={k}: {}", r.detail);
        }
    }
}

#[test]
fn sign_matrix_det_matches_int_path() {
    let g = gen_characters(3, 1).unwrap();
    let sub = g.select(&[0, 1, 2], &[1, 2, 4]);
    let rows: Vec<Vec<i64>> = sub.to_int_rows();
    assert_eq!(det_sign_matrix(&sub).unwrap(), BigInt::from(leibniz(&rows)));
}
