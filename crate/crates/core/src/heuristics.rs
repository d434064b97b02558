//! Constructive colorings: Beck–Fiala floating colors, the ternary
//! multiplicative coloring, seeded random colorings and greedy sign flips.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_cap, Error, Result};
use crate::rng::SplitMix64;
use crate::system::{eval_discrepancy, Coloring, SetSystem, SignMatrix};

pub const MAX_BECK_FIALA_GROUND: usize = 2000;
pub const MAX_BECK_FIALA_SETS: usize = 20_000;
pub const MAX_TERNARY_N: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicOutcome {
    pub coloring: Coloring,
    /// Maximum absolute row sum under `coloring`.
    pub achieved: u64,
    pub guarantee: Option<u64>,
    pub iterations: u64,
}

/// Beck–Fiala rounding: a coloring with discrepancy at most `2t − 1`, where
/// `t` is the largest number of sets containing one element.
///
/// Colors start at 0. While some variable floats strictly inside `(−1, 1)`,
/// the sets with more than `t` floating elements are active; a nonzero vector
/// supported on the floating variables and orthogonal to every active set
/// exists because there are fewer active sets than floating variables. The
/// colors move along it until one more variable reaches `±1` and freezes.
pub fn beck_fiala(system: &SetSystem) -> Result<HeuristicOutcome> {
    let n = system.ground_size();
    check_cap("ground size", n as u128, MAX_BECK_FIALA_GROUND as u128)?;
    check_cap("sets", system.num_sets() as u128, MAX_BECK_FIALA_SETS as u128)?;
    let t = system.max_degree();
    let members: Vec<Vec<usize>> = system.sets().iter().map(|s| s.members.ones().collect()).collect();
    let mut sets_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, m) in members.iter().enumerate() {
        for &e in m {
            sets_of[e].push(s);
        }
    }

    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut floating = vec![true; n];
    let mut floating_count: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut in_set = vec![false; n];
    let one = BigRational::one();
    let mut rounds = 0u64;

    loop {
        let free: Vec<usize> = (0..n).filter(|&i| floating[i]).collect();
        if free.is_empty() {
            break;
        }
        rounds += 1;
        let active: Vec<usize> = (0..members.len()).filter(|&s| floating_count[s] > t).collect();
        let cols = &free[..(active.len() + 1).min(free.len())];
        if active.len() >= free.len() {
            return Err(Error::Invariant(format!(
                "{} active sets but only {} floating elements",
                active.len(),
                free.len()
            )));
        }
        let mut rows: Vec<Vec<BigRational>> = active
            .iter()
            .map(|&s| {
                for &e in &members[s] {
                    in_set[e] = true;
                }
                let row = cols
                    .iter()
                    .map(|&c| if in_set[c] { one.clone() } else { BigRational::zero() })
                    .collect();
                for &e in &members[s] {
                    in_set[e] = false;
                }
                row
            })
            .collect();
        let y = kernel_vector(&mut rows, cols.len());

        let mut step: Option<BigRational> = None;
        for (yi, &c) in y.iter().zip(cols) {
            if yi.is_zero() {
                continue;
            }
            let target = if yi.is_positive() { &one - &x[c] } else { -&one - &x[c] };
            let lambda = target / yi;
            if step.as_ref().is_none_or(|s| &lambda < s) {
                step = Some(lambda);
            }
        }
        let step = step.expect("kernel vector is nonzero");
        for (yi, &c) in y.iter().zip(cols) {
            if yi.is_zero() {
                continue;
            }
            x[c] += &step * yi;
            if x[c].abs() == one {
                floating[c] = false;
                for &s in &sets_of[c] {
                    floating_count[s] -= 1;
                }
            }
        }
    }

    let values: Vec<i8> = x.iter().map(|v| if v.is_positive() { 1 } else { -1 }).collect();
    let coloring = Coloring::new(values)?;
    let achieved = eval_discrepancy(&system.to_matrix(), &coloring)?.value;
    let guarantee = (2 * t as u64).saturating_sub(1);
    if achieved > guarantee {
        return Err(Error::Invariant(format!(
            "Beck-Fiala coloring has discrepancy {achieved} above its guarantee {guarantee}"
        )));
    }
    Ok(HeuristicOutcome {
        coloring,
        achieved,
        guarantee: Some(guarantee),
        iterations: rounds,
    })
}

/// Reduces `rows` (each of length `width > rows.len()`) to row echelon form and
/// returns the kernel vector with the first free column set to 1 and the other
/// free columns set to 0.
fn kernel_vector(rows: &mut [Vec<BigRational>], width: usize) -> Vec<BigRational> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r][c..].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..width {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..width)
        .find(|c| !pivots.contains(c))
        .expect("more columns than rows");
    let mut y = vec![BigRational::zero(); width];
    y[free] = BigRational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        y[pc] = -rows[row][free].clone();
    }
    y
}

/// `f(i) = −1` exactly when the last nonzero ternary digit of `i` is 2.
pub fn ternary_coloring(n: usize) -> Result<Coloring> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    check_cap("n", n as u128, MAX_TERNARY_N as u128)?;
    let values = (1..=n)
        .map(|mut i| {
            while i % 3 == 0 {
                i /= 3;
            }
            if i % 3 == 2 {
                -1
            } else {
                1
            }
        })
        .collect();
    Ok(Coloring::from_signs_unchecked(values))
}

/// One SplitMix64 draw per entry; the top bit set means `−1`.
pub fn random_coloring(n: usize, seed: u64) -> Coloring {
    let mut rng = SplitMix64::new(seed);
    Coloring::from_signs_unchecked((0..n).map(|_| rng.sign()).collect())
}

/// Flips, one at a time, the sign whose flip lowers the maximum absolute row
/// sum the most (lowest index on ties) until no flip improves or `max_passes`
/// flips have been made.
pub fn greedy_improve(
    matrix: &SignMatrix,
    start: &Coloring,
    max_passes: u64,
) -> Result<HeuristicOutcome> {
    if start.len() != matrix.cols() {
        return Err(Error::LengthMismatch {
            what: "coloring",
            expected: matrix.cols(),
            got: start.len(),
        });
    }
    let mut coloring = start.clone();
    let mut sums: Vec<i64> = (0..matrix.rows())
        .map(|r| eval_row(matrix.row(r), coloring.values()))
        .collect();
    let mut value = sums.iter().map(|s| s.abs()).max().unwrap_or(0);
    let mut flips = 0u64;
    while flips < max_passes {
        let mut best: Option<(i64, usize)> = None;
        for j in 0..matrix.cols() {
            let x = coloring.get(j) as i64;
            let after = (0..matrix.rows())
                .map(|r| (sums[r] - 2 * x * matrix.get(r, j) as i64).abs())
                .max()
                .unwrap_or(0);
            if after < value && best.is_none_or(|(b, _)| after < b) {
                best = Some((after, j));
            }
        }
        let Some((after, j)) = best else { break };
        let x = coloring.get(j) as i64;
        for (r, s) in sums.iter_mut().enumerate() {
            *s -= 2 * x * matrix.get(r, j) as i64;
        }
        coloring.flip(j);
        value = after;
        flips += 1;
    }
    Ok(HeuristicOutcome {
        coloring,
        achieved: value as u64,
        guarantee: None,
        iterations: flips,
    })
}

fn eval_row(row: &[i8], x: &[i8]) -> i64 {
    row.iter().zip(x).map(|(&a, &b)| a as i64 * b as i64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;
    use crate::exact::disc_exact;
    use crate::generators::{gen_characters, gen_hap, gen_subcubes};
    use crate::system::{hap_disc_stream, HapMode, NamedSet};

    fn system(n: usize, sets: &[&[usize]]) -> SetSystem {
        let ground = (1..=n).map(|i| i.to_string()).collect();
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, s)| NamedSet {
                name: format!("s{i}"),
                members: BitSet::from_indices(n, s.iter().copied()).unwrap(),
            })
            .collect();
        SetSystem::new(ground, sets).unwrap()
    }

    #[test]
    fn singletons() {
        let s = system(3, &[&[0], &[1], &[2]]);
        let out = beck_fiala(&s).unwrap();
        assert_eq!(out.guarantee, Some(1));
        assert!(out.achieved <= 1);
    }

    #[test]
    fn single_even_set_balances() {
        let s = system(4, &[&[0, 1, 2, 3]]);
        let out = beck_fiala(&s).unwrap();
        assert_eq!(out.guarantee, Some(1));
        assert_eq!(out.achieved, 0);
    }

    #[test]
    fn hap_multiples_twelve() {
        let s = gen_hap(12, HapMode::Multiples).unwrap();
        assert_eq!(s.max_degree(), 6);
        let out = beck_fiala(&s).unwrap();
        assert_eq!(out.guarantee, Some(11));
        assert!(out.achieved <= 11);
        assert_eq!(disc_exact(&s.to_matrix()).unwrap().value, 1);
    }

    #[test]
    fn empty_system() {
        let out = beck_fiala(&SetSystem::empty()).unwrap();
        assert_eq!((out.achieved, out.guarantee), (0, Some(0)));
    }

    #[test]
    fn subcubes_within_guarantee() {
        for d in 1..=4 {
            let out = beck_fiala(&gen_subcubes(d).unwrap()).unwrap();
            assert!(out.achieved < 2 << d);
        }
    }

    #[test]
    fn ternary_first_nine() {
        let f = ternary_coloring(9).unwrap();
        assert_eq!(f.values(), [1, -1, 1, 1, -1, -1, 1, -1, 1]);
        assert_eq!(hap_disc_stream(9, HapMode::Prefix, &f).unwrap().value, 2);
        let g = ternary_coloring(729).unwrap();
        for j in 0..=6 {
            assert_eq!(g.get(3usize.pow(j) - 1), 1);
        }
        assert!(ternary_coloring(0).is_err());
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(random_coloring(50, 7), random_coloring(50, 7));
        assert_ne!(random_coloring(8, 0), random_coloring(8, 1));
        let big = random_coloring(1_000_000, 0);
        assert!(big.sum().abs() <= 5000);
    }

    #[test]
    fn greedy_examples() {
        let g = gen_characters(2, 1).unwrap();
        let out = greedy_improve(&g, &Coloring::all_ones(4), 100).unwrap();
        assert_eq!((out.achieved, out.iterations), (0, 0));

        let s = gen_subcubes(2).unwrap().to_matrix();
        let start = Coloring::all_ones(4);
        assert_eq!(eval_discrepancy(&s, &start).unwrap().value, 4);
        let out = greedy_improve(&s, &start, 100).unwrap();
        assert_eq!(out.achieved, 1);
        assert_eq!(eval_discrepancy(&s, &out.coloring).unwrap().value, 1);

        let out = greedy_improve(&s, &start, 0).unwrap();
        assert_eq!((out.achieved, out.coloring), (4, start));

        assert!(greedy_improve(&s, &Coloring::all_ones(3), 1).is_err());
    }
}
