use discrepancy_core::generators::{gen_hap, gen_subcubes};
use discrepancy_core::heuristics::{beck_fiala, greedy_improve, random_coloring, ternary_coloring};
use discrepancy_core::rng::SplitMix64;
use discrepancy_core::system::{eval_discrepancy, hap_disc_stream};
use discrepancy_core::{BitSet, Coloring, HapMode, NamedSet, SetSystem, SignMatrix};
use proptest::prelude::*;

fn degree(system: &SetSystem) -> u64 {
    (0..system.ground_size())
        .map(|e| system.sets().iter().filter(|s| s.members.contains(e)).count() as u64)
        .max()
        .unwrap_or(0)
}

fn check_guarantee(system: &SetSystem) {
    let out = beck_fiala(system).unwrap();
    let t = degree(system);
    let direct = system
        .sets()
        .iter()
        .map(|s| s.members.ones().map(|i| out.coloring.get(i) as i64).sum::<i64>().unsigned_abs())
        .max()
        .unwrap_or(0);
    assert_eq!(out.achieved, direct);
    assert_eq!(out.guarantee, Some((2 * t).saturating_sub(1)));
    assert!(direct <= (2 * t).saturating_sub(1), "achieved {direct} with t = {t}");
}

fn random_system(rng: &mut SplitMix64, n: usize, sets: usize, density: u64) -> SetSystem {
    let ground = (0..n).map(|i| format!("x{i}")).collect();
    let sets = (0..sets)
        .map(|j| NamedSet {
            name: format!("S{j}"),
            members: BitSet::from_bools(&(0..n).map(|_| rng.below(100) < density).collect::<Vec<_>>()),
        })
        .collect();
    SetSystem::new(ground, sets).unwrap()
}

#[test]
fn beck_fiala_random_systems() {
    let mut rng = SplitMix64::new(23);
    for trial in 0..60 {
        let n = 5 + trial % 40;
        let sets = 1 + (trial * 7) % 50;
        let density = [10, 30, 50, 80][trial % 4];
        check_guarantee(&random_system(&mut rng, n, sets, density));
    }
}

#[test]
fn beck_fiala_hap_multiples() {
    for n in (1..=60).chain((70..=500).step_by(10)) {
        check_guarantee(&gen_hap(n, HapMode::Multiples).unwrap());
    }
}

#[test]
fn beck_fiala_subcubes() {
    for d in 1..=6 {
        check_guarantee(&gen_subcubes(d).unwrap());
    }
}

#[test]
fn ternary_is_completely_multiplicative() {
    let f = ternary_coloring(10_000).unwrap();
    let at = |i: usize| f.get(i - 1) as i32;
    for a in 1..=10_000usize {
        for b in 1..=10_000 / a {
            assert_eq!(at(a * b), at(a) * at(b), "a={a} b={b}");
        }
    }
}

#[test]
fn ternary_matches_digit_rule() {
    let f = ternary_coloring(5000).unwrap();
    for i in 1..=5000usize {
        let mut digits = Vec::new();
        let mut x = i;
        while x > 0 {
            digits.push(x % 3);
            x /= 3;
        }
        let last_nonzero = *digits.iter().find(|&&d| d != 0).unwrap();
        assert_eq!(f.get(i - 1), if last_nonzero == 2 { -1 } else { 1 }, "i={i}");
    }
}

#[test]
fn ternary_discrepancy_is_logarithmic() {
    for j in 1..=12u32 {
        let n = 3usize.pow(j);
        let f = ternary_coloring(n).unwrap();
        let v = hap_disc_stream(n, HapMode::Prefix, &f).unwrap().value;
        assert!(v <= j as u64 + 1, "n=3^{j}: {v}");
    }
}

#[test]
fn random_colorings_are_balanced_and_seeded() {
    let a = random_coloring(1_000_000, 0);
    assert!(a.sum().abs() <= 5000);
    assert_eq!(a, random_coloring(1_000_000, 0));
    assert_ne!(random_coloring(64, 1), random_coloring(64, 2));
}

proptest! {
    #[test]
    fn greedy_never_increases(
        (m, start, passes) in (1usize..=8, 1usize..=12).prop_flat_map(|(r, c)| (
            prop::collection::vec(-1i8..=1, r * c).prop_map(move |e| SignMatrix::new(r, c, e).unwrap()),
            prop::collection::vec(prop::sample::select(vec![-1i8, 1]), c),
            0u64..20,
        ))
    ) {
        let start = Coloring::new(start).unwrap();
        let before = eval_discrepancy(&m, &start).unwrap().value;
        let out = greedy_improve(&m, &start, passes).unwrap();
        prop_assert!(out.achieved <= before);
        prop_assert_eq!(eval_discrepancy(&m, &out.coloring).unwrap().value, out.achieved);
        prop_assert!(out.iterations <= passes);
    }
}
