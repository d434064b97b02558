//! Exact determinants and maximal-minor search.
//!
//! Determinants use fraction-free (Bareiss) elimination. When the Hadamard
//! bound guarantees that every intermediate fits, elimination runs in `i128`;
//! otherwise it falls back to arbitrary precision. Either way the result is
//! exact.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_cap, Error, Result};
use crate::rng::SplitMix64;
use crate::system::SignMatrix;

pub const MAX_DET_DIM: usize = 64;
/// Largest `C(N, M)` the exhaustive column search will enumerate.
pub const MAX_EXHAUSTIVE_SUBSETS: u128 = 100_000_000;
/// Order above which sign-matrix minors could overflow `i128` during elimination.
const MAX_I128_SIGN_ORDER: usize = 25;

/// Exact determinant of a square integer matrix (dimension ≤ 64).
pub fn det_exact(matrix: &[Vec<i64>]) -> Result<BigInt> {
    let n = matrix.len();
    if let Some(r) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "determinant needs a square matrix, got {n} rows and a row of length {}",
            r.len()
        )));
    }
    check_cap("determinant dimension", n as u128, MAX_DET_DIM as u128)?;
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    if hadamard_log2(matrix) <= 62.0 {
        let mut a: Vec<i128> = matrix.iter().flatten().map(|&x| x as i128).collect();
        Ok(BigInt::from(bareiss_i128(&mut a, n)))
    } else {
        let mut a: Vec<BigInt> = matrix.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(bareiss_big(&mut a, n))
    }
}

/// Determinant of a square sign matrix.
pub fn det_sign_matrix(m: &SignMatrix) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(Error::InvalidArgument(format!(
            "determinant needs a square matrix, got {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    det_exact(&m.to_int_rows())
}

/// `log2` of the product of row norms.
fn hadamard_log2(matrix: &[Vec<i64>]) -> f64 {
    matrix
        .iter()
        .map(|row| {
            let sq: f64 = row.iter().map(|&x| (x as f64) * (x as f64)).sum();
            if sq == 0.0 {
                0.0
            } else {
                0.5 * sq.log2()
            }
        })
        .sum()
}

/// In-place Bareiss on a row-major `n×n` buffer. Caller guarantees no overflow.
pub(crate) fn bareiss_i128(a: &mut [i128], n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let aik = a[i * n + k];
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * pivot - aik * a[k * n + j]) / prev;
            }
        }
        prev = pivot;
    }
    sign * a[n * n - 1]
}

fn bareiss_big(a: &mut [BigInt], n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let v = (&a[i * n + j] * &pivot - &aik * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of the square sign submatrix on `rows × cols`, as `i128`.
/// Requires `rows.len() ≤ 25`.
pub(crate) fn sign_minor(m: &SignMatrix, rows: &[usize], cols: &[usize]) -> i128 {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    debug_assert!(k <= MAX_I128_SIGN_ORDER);
    let mut a: Vec<i128> = Vec::with_capacity(k * k);
    for &r in rows {
        for &c in cols {
            a.push(m.get(r, c) as i128);
        }
    }
    bareiss_i128(&mut a, k)
}

/// Expansion coefficients along an appended last column.
///
/// For the `k×(k−1)` block on `rows × cols`, returns `C` such that appending
/// column `x` gives determinant `Σ_i C_i·x_i`.
fn cofactor_vector(m: &SignMatrix, rows: &[usize], cols: &[usize]) -> Vec<i128> {
    let k = rows.len();
    debug_assert_eq!(cols.len() + 1, k);
    let mut minor_rows = Vec::with_capacity(k.saturating_sub(1));
    (0..k)
        .map(|i| {
            minor_rows.clear();
            minor_rows.extend(rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &r)| r));
            let minor = sign_minor(m, &minor_rows, cols);
            if (i + k - 1) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

/// Visits every `k`-subset of columns in lexicographic order together with the
/// determinant of the `rows × subset` minor, where `k = rows.len() ≤ 25`.
/// The visitor returns `false` to stop early.
pub fn for_each_maximal_minor(
    m: &SignMatrix,
    rows: &[usize],
    mut visit: impl FnMut(&[usize], i128) -> bool,
) {
    let k = rows.len();
    let n = m.cols();
    assert!(k <= MAX_I128_SIGN_ORDER, "minor order {k} too large for i128");
    if k == 0 {
        visit(&[], 1);
        return;
    }
    if k > n {
        return;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    // Columns are read once per row to keep the inner dot product tight.
    let col_entries: Vec<Vec<i128>> = (0..n)
        .map(|c| rows.iter().map(|&r| m.get(r, c) as i128).collect())
        .collect();
    let mut prefix: Vec<usize> = (0..k - 1).collect();
    loop {
        let cof = cofactor_vector(m, rows, &prefix);
        let start = prefix.last().map_or(0, |&c| c + 1);
        subset[..k - 1].copy_from_slice(&prefix);
        for c in start..n {
            let det: i128 = cof.iter().zip(&col_entries[c]).map(|(a, b)| a * b).sum();
            subset[k - 1] = c;
            if !visit(&subset, det) {
                return;
            }
        }
        // Prefixes leave room for at least one trailing column.
        if !next_combination(&mut prefix, n - 1) {
            return;
        }
    }
}

/// Visits, in lexicographic order, every `k`-subset of `vectors` (each of
/// length `k`, entries in `{−1, 0, 1}`) whose vectors are linearly independent,
/// with the absolute determinant of the matrix they form.
///
/// Subsets are grown one vector at a time. Each new vector is reduced against
/// the chosen ones by the fraction-free elimination steps already performed,
/// so its entries are bordered minors and the last pivot is the determinant.
/// A prefix that is already dependent is not extended.
pub fn for_each_independent_subset(
    vectors: &[Vec<i64>],
    k: usize,
    mut visit: impl FnMut(&[usize], u128) -> bool,
) {
    assert!(k <= MAX_I128_SIGN_ORDER, "minor order {k} too large for i128");
    if k == 0 {
        visit(&[], 1);
        return;
    }
    if vectors.len() < k {
        return;
    }
    let mut walk = SubsetWalk {
        vectors,
        k,
        reduced: vec![vec![0; k]; k],
        pivot_cols: vec![0; k],
        pivots: vec![1; k + 1],
        used: vec![false; k],
        chosen: vec![0; k],
    };
    walk.descend(0, 0, &mut visit);
}

struct SubsetWalk<'a> {
    vectors: &'a [Vec<i64>],
    k: usize,
    /// Reduced form of the vector under consideration at each depth.
    reduced: Vec<Vec<i128>>,
    pivot_cols: Vec<usize>,
    /// `pivots[0] = 1`, `pivots[j + 1]` is the pivot chosen at depth `j`.
    pivots: Vec<i128>,
    used: Vec<bool>,
    chosen: Vec<usize>,
}

impl SubsetWalk<'_> {
    fn descend(&mut self, depth: usize, start: usize, visit: &mut impl FnMut(&[usize], u128) -> bool) -> bool {
        let k = self.k;
        if depth + 1 == k {
            return self.finish(start, visit);
        }
        for r in start..=self.vectors.len() - (k - depth) {
            let (done, rest) = self.reduced.split_at_mut(depth);
            let v = &mut rest[0];
            for (x, &y) in v.iter_mut().zip(&self.vectors[r]) {
                *x = y as i128;
            }
            for (i, p) in done.iter().enumerate() {
                let f = v[self.pivot_cols[i]];
                for (x, q) in v.iter_mut().zip(p) {
                    *x = (*x * self.pivots[i + 1] - f * q) / self.pivots[i];
                }
            }
            let Some(pc) = (0..k).find(|&c| !self.used[c] && v[c] != 0) else {
                continue;
            };
            self.chosen[depth] = r;
            self.pivots[depth + 1] = v[pc];
            self.pivot_cols[depth] = pc;
            self.used[pc] = true;
            let go_on = self.descend(depth + 1, r + 1, visit);
            self.used[pc] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Last level: the determinant is linear in the final vector, with the
    /// cofactors of the chosen `k − 1` vectors as coefficients. They span the
    /// kernel of the echelon rows, scaled so the free entry is the last pivot.
    fn finish(&mut self, start: usize, visit: &mut impl FnMut(&[usize], u128) -> bool) -> bool {
        let k = self.k;
        let depth = k - 1;
        let mut cof = vec![0i128; k];
        let free = (0..k).find(|&c| !self.used[c]).expect("one column is unused");
        cof[free] = self.pivots[depth];
        for i in (0..depth).rev() {
            let pc = self.pivot_cols[i];
            let row = &self.reduced[i];
            let sum: i128 = (0..k).filter(|&c| c != pc).map(|c| row[c] * cof[c]).sum();
            cof[pc] = -sum / row[pc];
        }
        for r in start..self.vectors.len() {
            let det: i128 = cof.iter().zip(&self.vectors[r]).map(|(a, &b)| a * b as i128).sum();
            if det == 0 {
                continue;
            }
            self.chosen[depth] = r;
            if !visit(&self.chosen, det.unsigned_abs()) {
                return false;
            }
        }
        true
    }
}

/// Advances `subset` (sorted, values `< n`) to its lexicographic successor.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// `ln C(n, k)` without overflow.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetStrategy {
    /// Every `M`-subset of columns; returns the lexicographically first maximiser.
    Exhaustive,
    /// Seeded restarts of best-improvement single-column swaps.
    RandomSwap { restarts: usize },
}

pub const DEFAULT_RESTARTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct DetSearchOutcome {
    /// Sorted column indices.
    pub columns: Vec<usize>,
    /// Determinant of the submatrix with columns in ascending order.
    pub det: BigInt,
    /// `|det|^{1/M}`.
    pub root: f64,
    pub threshold: f64,
    pub met_threshold: bool,
    /// Nonsingular subsets examined (exhaustive) or restarts run (random-swap).
    pub work: u64,
}

pub fn root_of(det_abs: f64, m: usize) -> f64 {
    if m == 0 {
        1.0
    } else {
        det_abs.powf(1.0 / m as f64)
    }
}

/// Searches for `M` columns (M = number of rows) with `|det|^{1/M} ≥ threshold`.
///
/// Not meeting the threshold is reported in the outcome, not as an error.
pub fn find_large_det_subset(
    matrix: &SignMatrix,
    strategy: DetStrategy,
    seed: u64,
    threshold: f64,
) -> Result<DetSearchOutcome> {
    let (m, n) = (matrix.rows(), matrix.cols());
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "need at least as many columns as rows, got {m}×{n}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("matrix has no rows".into()));
    }
    check_cap("square order", m as u128, MAX_I128_SIGN_ORDER as u128)?;
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "threshold must be finite and nonnegative, got {threshold}"
        )));
    }
    let rows: Vec<usize> = (0..m).collect();
    let (columns, det, work) = match strategy {
        DetStrategy::Exhaustive => {
            check_cap(
                "column subsets",
                binomial(n as u64, m as u64),
                MAX_EXHAUSTIVE_SUBSETS,
            )?;
            let columns: Vec<Vec<i64>> = matrix.transpose().to_int_rows();
            let mut best: Option<(u128, Vec<usize>)> = None;
            let mut work = 0u64;
            for_each_independent_subset(&columns, m, |cols, det| {
                work += 1;
                if best.as_ref().is_none_or(|(b, _)| det > *b) {
                    best = Some((det, cols.to_vec()));
                }
                true
            });
            let cols = best.map_or_else(|| (0..m).collect(), |(_, c)| c);
            let det = sign_minor(matrix, &rows, &cols);
            (cols, det, work)
        }
        DetStrategy::RandomSwap { restarts } => {
            if restarts == 0 {
                return Err(Error::InvalidArgument("restart budget must be positive".into()));
            }
            random_swap(matrix, restarts, seed, threshold)
        }
    };
    let root = root_of((det.abs() as f64).max(0.0), m);
    Ok(DetSearchOutcome {
        columns,
        det: BigInt::from(det),
        root,
        threshold,
        met_threshold: root >= threshold,
        work,
    })
}

fn random_swap(
    matrix: &SignMatrix,
    restarts: usize,
    seed: u64,
    threshold: f64,
) -> (Vec<usize>, i128, u64) {
    let (m, n) = (matrix.rows(), matrix.cols());
    let rows: Vec<usize> = (0..m).collect();
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(i128, Vec<usize>)> = None;
    let mut used = 0u64;
    for _ in 0..restarts {
        used += 1;
        let mut cols = rng.subset(n, m);
        let mut current = sign_minor(matrix, &rows, &cols).abs();
        loop {
            // Best single swap (position, replacement) over the whole neighbourhood.
            let mut best_swap: Option<(i128, usize, usize)> = None;
            for p in 0..m {
                let rest: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != p)
                    .map(|(_, &c)| c)
                    .collect();
                let cof = cofactor_vector(matrix, &rows, &rest);
                for c in 0..n {
                    if cols.contains(&c) {
                        continue;
                    }
                    let det: i128 = cof
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| a * matrix.get(i, c) as i128)
                        .sum::<i128>()
                        .abs();
                    if det > current && best_swap.is_none_or(|(b, _, _)| det > b) {
                        best_swap = Some((det, p, c));
                    }
                }
            }
            match best_swap {
                Some((det, p, c)) => {
                    cols[p] = c;
                    current = det;
                }
                None => break,
            }
        }
        cols.sort_unstable();
        let det = sign_minor(matrix, &rows, &cols);
        if best.as_ref().is_none_or(|(b, _)| det.abs() > b.abs()) {
            best = Some((det, cols));
        }
        let (b, _) = best.as_ref().expect("set above");
        if root_of(b.abs() as f64, m) >= threshold {
            break;
        }
    }
    let (det, cols) = best.expect("restarts > 0");
    (cols, det, used)
}

/// `|det|` as `f64`, saturating at infinity.
pub fn abs_to_f64(det: &BigInt) -> f64 {
    det.abs().to_f64().unwrap_or(f64::INFINITY)
}
