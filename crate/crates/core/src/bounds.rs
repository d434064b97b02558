//! Determinant lower-bound certificates and exact checks of the subcube,
//! character and embedding identities.
//!
//! For any real matrix `A`, `herdisc(A) ≥ ½·max_k max_B |det B|^{1/k}` over
//! `k×k` submatrices `B`. A [`LowerBoundCert`] names one such `B` together with
//! its exact determinant, so the bound can be rechecked independently.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::bitset::BitSet;
use crate::det::{
    binomial, det_exact, find_large_det_subset, for_each_independent_subset, for_each_maximal_minor, ln_binomial,
    next_combination, DetSearchOutcome, DetStrategy,
};
use crate::embedding::EmbeddingWitness;
use crate::error::{check_cap, check_range, Error, Result};
use crate::exact::herdisc_exact;
use crate::generators::{extend_pattern, gen_characters, gen_subcubes, representative, CharacterIndex, CubePattern};
use crate::rng::SplitMix64;
use crate::system::SignMatrix;

/// Relative tolerance for every real-valued comparison in this module.
pub const REL_TOL: f64 = 1e-9;
/// Largest `Σ_k C(rows,k)·C(cols,k)` the exhaustive certificate search visits.
pub const MAX_CERT_SUBMATRICES: u128 = 50_000_000;
pub const DEFAULT_GREEDY_RESTARTS: usize = 8;
/// Embedding checks scan every `a ∈ [n]` up to this dimension.
pub const FULL_SCAN_EMBED_DIM: usize = 6;
pub const MAX_CHECK_EMBED_DIM: usize = 8;
pub const SAMPLED_DIVISORS: usize = 10_000;
pub const MAX_TRANSFER_DIM: usize = 12;
pub const MAX_TRANSFER_HERDISC_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundCert {
    pub k: usize,
    pub row_subset: Vec<usize>,
    pub col_subset: Vec<usize>,
    pub det: BigInt,
    /// `½·|det|^{1/k}`, rounded down to 12 significant digits.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStrategy {
    Exhaustive,
    /// Complete-pivoting growth of the row/column sets from seeded starting entries.
    Greedy { restarts: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Counterexample when failed, empty otherwise.
    pub detail: String,
    pub trials: u64,
    /// Informational values (exact herdisc numbers, bounds) for the summary.
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(name: &str, trials: u64) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: true,
            detail: String::new(),
            trials,
            notes: Vec::new(),
        }
    }

    /// Records the first failure only.
    fn fail(&mut self, detail: String) {
        if self.passed {
            self.passed = false;
            self.detail = detail;
        }
    }
}

fn round_down_sig(x: f64, digits: i32) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - exp);
    (x * scale).floor() / scale
}

fn log2_abs(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 1000 {
        mag.to_f64().expect("fits in f64").log2()
    } else {
        let shift = bits - 900;
        (mag >> shift).to_f64().expect("fits in f64").log2() + shift as f64
    }
}

/// `½·|det|^{1/k}` rounded down to 12 significant digits.
pub fn half_root(det: &BigInt, k: usize) -> f64 {
    if det.is_zero() || k == 0 {
        return 0.0;
    }
    round_down_sig(0.5 * (log2_abs(det) / k as f64).exp2(), 12)
}

/// Orders `a^{1/ka}` against `b^{1/kb}` exactly.
fn cmp_roots(a: &BigUint, ka: usize, b: &BigUint, kb: usize) -> Ordering {
    a.pow(kb as u32).cmp(&b.pow(ka as u32))
}

struct Candidate {
    det_abs: BigUint,
    k: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Candidate {
    fn beats(&self, other: &Option<Candidate>) -> bool {
        match other {
            None => true,
            Some(o) => cmp_roots(&self.det_abs, self.k, &o.det_abs, o.k) == Ordering::Greater,
        }
    }
}

/// Best determinant lower bound over square submatrices of order `≤ kmax`.
///
/// Exhaustive search returns the true maximum with the first witness in
/// `(k, rows, cols)` lexicographic order; greedy search grows submatrices by
/// complete pivoting, where each pivot equals the determinant of the bordered
/// submatrix.
pub fn detlb_certificate(
    matrix: &SignMatrix,
    kmax: usize,
    strategy: CertStrategy,
    seed: u64,
) -> Result<LowerBoundCert> {
    let limit = matrix.rows().min(matrix.cols());
    if kmax == 0 || kmax > limit {
        return Err(Error::InvalidArgument(format!(
            "kmax must lie in 1..={limit}, got {kmax}"
        )));
    }
    let best = match strategy {
        CertStrategy::Exhaustive => exhaustive_cert(matrix, kmax)?,
        CertStrategy::Greedy { restarts } => {
            if restarts == 0 {
                return Err(Error::InvalidArgument("restart budget must be positive".into()));
            }
            greedy_cert(matrix, kmax, restarts, seed)
        }
    };
    let Some(mut best) = best else {
        // Every entry is zero: no nonsingular submatrix, the bound is vacuous.
        return Ok(LowerBoundCert {
            k: 1,
            row_subset: vec![0],
            col_subset: vec![0],
            det: BigInt::zero(),
            bound: 0.0,
        });
    };
    best.rows.sort_unstable();
    best.cols.sort_unstable();
    let det = det_exact(&matrix.int_submatrix(&best.rows, &best.cols))?;
    debug_assert_eq!(det.magnitude(), &best.det_abs);
    Ok(LowerBoundCert {
        k: best.k,
        bound: half_root(&det, best.k),
        row_subset: best.rows,
        col_subset: best.cols,
        det,
    })
}

fn exhaustive_cert(matrix: &SignMatrix, kmax: usize) -> Result<Option<Candidate>> {
    let (m, n) = (matrix.rows(), matrix.cols());
    let total: u128 = (1..=kmax as u64)
        .map(|k| binomial(m as u64, k).saturating_mul(binomial(n as u64, k)))
        .fold(0u128, |a, b| a.saturating_add(b));
    check_cap("submatrices", total, MAX_CERT_SUBMATRICES)?;
    // Subsets of the shorter side are enumerated directly, the longer side is
    // streamed through the elimination walk.
    let transposed = m < n;
    let (outer_len, inner): (usize, Vec<Vec<i64>>) = if transposed {
        (m, matrix.transpose().to_int_rows())
    } else {
        (n, matrix.to_int_rows())
    };
    let mut best: Option<Candidate> = None;
    for k in 1..=kmax {
        let mut best_k: Option<(u128, Vec<usize>, Vec<usize>)> = None;
        let mut outer: Vec<usize> = (0..k).collect();
        loop {
            let vectors: Vec<Vec<i64>> = inner
                .iter()
                .map(|v| outer.iter().map(|&i| v[i]).collect())
                .collect();
            for_each_independent_subset(&vectors, k, |chosen, det| {
                let (rows, cols) = if transposed {
                    (outer.as_slice(), chosen)
                } else {
                    (chosen, outer.as_slice())
                };
                let better = match &best_k {
                    None => true,
                    Some((b, br, bc)) => {
                        det > *b || (det == *b && (rows, cols) < (br.as_slice(), bc.as_slice()))
                    }
                };
                if better {
                    best_k = Some((det, rows.to_vec(), cols.to_vec()));
                }
                true
            });
            if !next_combination(&mut outer, outer_len) {
                break;
            }
        }
        if let Some((det_abs, rows, cols)) = best_k {
            let cand = Candidate {
                det_abs: BigUint::from(det_abs),
                k,
                rows,
                cols,
            };
            if cand.beats(&best) {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

fn greedy_cert(matrix: &SignMatrix, kmax: usize, restarts: usize, seed: u64) -> Option<Candidate> {
    let (m, n) = (matrix.rows(), matrix.cols());
    let nonzero: Vec<(usize, usize)> = (0..m)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| matrix.get(r, c) != 0)
        .collect();
    if nonzero.is_empty() {
        return None;
    }
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<Candidate> = None;
    for restart in 0..restarts {
        let first = if restart == 0 {
            nonzero[0]
        } else {
            nonzero[rng.below(nonzero.len() as u64) as usize]
        };
        let mut a: Vec<Vec<BigInt>> = matrix
            .to_int_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut row_free = vec![true; m];
        let mut col_free = vec![true; n];
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut prev = BigInt::from(1);
        let mut pivot_at = Some(first);
        while let Some((pr, pc)) = pivot_at {
            let pivot = a[pr][pc].clone();
            rows.push(pr);
            cols.push(pc);
            row_free[pr] = false;
            col_free[pc] = false;
            let cand = Candidate {
                det_abs: pivot.magnitude().clone(),
                k: rows.len(),
                rows: rows.clone(),
                cols: cols.clone(),
            };
            if cand.beats(&best) {
                best = Some(cand);
            }
            if rows.len() == kmax {
                break;
            }
            // One fraction-free elimination step; afterwards a[i][j] is the
            // determinant of the chosen block bordered by row i and column j.
            for i in (0..m).filter(|&i| row_free[i]) {
                let aic = a[i][pc].clone();
                for j in (0..n).filter(|&j| col_free[j]) {
                    let v = (&a[i][j] * &pivot - &aic * &a[pr][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = pivot;
            pivot_at = None;
            let mut best_mag: Option<BigUint> = None;
            for i in (0..m).filter(|&i| row_free[i]) {
                for j in (0..n).filter(|&j| col_free[j]) {
                    let mag = a[i][j].magnitude();
                    if !mag.is_zero() && best_mag.as_ref().is_none_or(|b| mag > b) {
                        best_mag = Some(mag.clone());
                        pivot_at = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Recomputes the named minor and its bound.
pub fn verify_certificate(matrix: &SignMatrix, cert: &LowerBoundCert) -> Result<CheckReport> {
    if cert.k == 0 {
        return Err(Error::Malformed("order k must be positive".into()));
    }
    if cert.row_subset.len() != cert.k || cert.col_subset.len() != cert.k {
        return Err(Error::Malformed(format!(
            "expected {} rows and columns, got {} and {}",
            cert.k,
            cert.row_subset.len(),
            cert.col_subset.len()
        )));
    }
    for (what, idx, bound) in [
        ("row", &cert.row_subset, matrix.rows()),
        ("column", &cert.col_subset, matrix.cols()),
    ] {
        if let Some(i) = idx.iter().find(|&&i| i >= bound) {
            return Err(Error::Malformed(format!("{what} index {i} out of range {bound}")));
        }
        if idx.iter().collect::<HashSet<_>>().len() != idx.len() {
            return Err(Error::Malformed(format!("repeated {what} index")));
        }
    }
    let det = det_exact(&matrix.int_submatrix(&cert.row_subset, &cert.col_subset))?;
    let bound = half_root(&det, cert.k);
    let mut report = CheckReport::new("certificate", 1);
    if det != cert.det {
        report.fail(format!(
            "det mismatch: certificate has {}, recomputed {}",
            cert.det, det
        ));
    } else if (bound - cert.bound).abs() > REL_TOL * bound.abs().max(f64::MIN_POSITIVE) {
        report.fail(format!(
            "bound mismatch: certificate has {}, recomputed {}",
            cert.bound, bound
        ));
    }
    report.notes.push(format!("herdisc >= {bound}"));
    Ok(report)
}

fn word_bits(w: u64, k: usize) -> Vec<bool> {
    (0..k).map(|l| w >> (k - 1 - l) & 1 == 1).collect()
}

/// `(pattern, sign)` for every `w ∈ {0,1}^{|v|}`: the sets `S_{v(w)}` and the
/// coefficients `(−1)^{⟨v, r_{v(w)}⟩}` of the expansion of `χ_v`.
fn expansion_terms(v: &CharacterIndex) -> Vec<(CubePattern, i64)> {
    let k = v.weight();
    (0..1u64 << k)
        .map(|w| {
            let p = extend_pattern(v, &word_bits(w, k)).expect("word length equals weight");
            let sign = v.eval(representative(&p)) as i64;
            (p, sign)
        })
        .collect()
}

/// Checks `χ_v(u) = Σ_w (−1)^{⟨v, r_{v(w)}⟩}·1_{v(w)}(u)` at every point `u`.
pub fn check_char_decomposition(v: &CharacterIndex) -> Result<CheckReport> {
    let d = v.dim();
    check_range("d", d as u64, 1, 16)?;
    check_range("weight", v.weight() as u64, 0, 12)?;
    let terms = expansion_terms(v);
    let mut report = CheckReport::new("char_decomposition", 1 << d);
    for u in 0..1u64 << d {
        let lhs = v.eval(u) as i64;
        let rhs: i64 = terms
            .iter()
            .filter(|(p, _)| p.contains(u))
            .map(|(_, s)| s)
            .sum();
        if lhs != rhs {
            report.fail(format!("v={v} u={}: chi={lhs}, expansion={rhs}", crate::generators::point_label(d, u)));
            break;
        }
    }
    Ok(report)
}

/// Identity for the signed sum of a character over `U` and, for `d ≤ 4`, the
/// inequality `herdisc(G_{d,k}) ≤ 2^k·herdisc(𝒮^d)` with both sides exact.
pub fn check_transfer(d: usize, k: usize, trials: u64, seed: u64) -> Result<CheckReport> {
    check_range("d", d as u64, 1, MAX_TRANSFER_DIM as u64)?;
    check_range("k", k as u64, 0, d as u64)?;
    let mut rng = SplitMix64::new(seed);
    let mut report = CheckReport::new("transfer", trials);
    let points = 1u64 << d;
    for trial in 0..trials {
        let v_bits = rng
            .subset(d, k)
            .into_iter()
            .fold(0u64, |acc, i| acc | 1 << (d - 1 - i));
        let v = CharacterIndex::new(d, v_bits)?;
        let f: Vec<i64> = (0..points).map(|_| rng.sign() as i64).collect();
        let in_u: Vec<bool> = (0..points).map(|_| rng.coin()).collect();
        let lhs: i64 = (0..points)
            .filter(|&u| in_u[u as usize])
            .map(|u| v.eval(u) as i64 * f[u as usize])
            .sum();
        let rhs: i64 = expansion_terms(&v)
            .iter()
            .map(|(p, sign)| {
                sign * p
                    .points()
                    .into_iter()
                    .filter(|&u| in_u[u as usize])
                    .map(|u| f[u as usize])
                    .sum::<i64>()
            })
            .sum();
        if lhs != rhs {
            report.fail(format!("trial {trial}, v={v}: character sum {lhs}, subcube expansion {rhs}"));
            break;
        }
    }
    if d <= MAX_TRANSFER_HERDISC_DIM {
        let g = herdisc_exact(&gen_characters(d, k)?, 16)?.value;
        let s = herdisc_exact(&gen_subcubes(d)?.to_matrix(), 16)?.value;
        let factor = 1u64 << k;
        report.notes.push(format!("herdisc(G_{d},{k}) = {g}"));
        report.notes.push(format!("herdisc(S^{d}) = {s}"));
        report.notes.push(format!("{g} <= {factor}*{s}"));
        if g > factor * s {
            report.fail(format!("herdisc(G_{d},{k}) = {g} > {factor}*{s}"));
        }
    }
    Ok(report)
}

/// Smallest pattern whose subcube contains every point of `set`.
fn enclosing_pattern(d: usize, set: &[u64]) -> CubePattern {
    use crate::generators::PatternSymbol;
    let symbols = (0..d)
        .map(|i| {
            let bit = |u: u64| u >> (d - 1 - i) & 1;
            let first = bit(set[0]);
            if set.iter().all(|&u| bit(u) == first) {
                if first == 1 {
                    PatternSymbol::One
                } else {
                    PatternSymbol::Zero
                }
            } else {
                PatternSymbol::Star
            }
        })
        .collect();
    CubePattern::new(symbols)
}

/// Checks that divisibility over `{b_u}` reproduces the subcube system.
///
/// (i) `a_v | b_u ⇔ u ∈ S_v` for all `v, u`; (ii) every nonempty
/// `{u : a | b_u}` is a subcube, for all `a ∈ [n]` when `d ≤ 6` and for the
/// `a_v` plus 10⁴ seeded random `a` otherwise; (iii) on `trials` seeded
/// `(f, U)`, the largest subcube sum over `U` equals the largest divisor-class
/// sum over the image of `U`.
pub fn check_embedding(witness: &EmbeddingWitness, trials: u64, seed: u64) -> Result<CheckReport> {
    let d = witness.dim();
    check_cap("embedding check dimension", d as u128, MAX_CHECK_EMBED_DIM as u128)?;
    let mut report = CheckReport::new("embedding", trials);
    let points = 1usize << d;
    let b: Vec<u64> = witness
        .b_values()
        .iter()
        .map(|x| x.to_u64().expect("b_u fits in u64 for d <= 8"))
        .collect();
    let n = witness.n().to_u64().expect("n fits in u64 for d <= 8");

    for v in CubePattern::all(d) {
        let a = witness.a(&v).to_u64().expect("a_v <= n");
        for (u, &bu) in b.iter().enumerate() {
            if (bu % a == 0) != v.contains(u as u64) {
                report.fail(format!("a_v={a} (v={v}) vs b_u={bu}: divisibility disagrees with membership"));
                return Ok(report);
            }
        }
    }

    let full_scan = d <= FULL_SCAN_EMBED_DIM;
    let divisors: Vec<u64> = if full_scan {
        (1..=n).collect()
    } else {
        let mut rng = SplitMix64::new(seed ^ 0xD1B5_4A32_D192_ED03);
        let mut a: Vec<u64> = witness
            .a_values()
            .iter()
            .map(|x| x.to_u64().expect("a_v <= n"))
            .collect();
        a.extend((0..SAMPLED_DIVISORS).map(|_| 1 + rng.below(n)));
        a
    };
    let mut classes: HashSet<BitSet> = HashSet::new();
    for &a in &divisors {
        let members: Vec<u64> = (0..points as u64).filter(|&u| b[u as usize] % a == 0).collect();
        if members.is_empty() {
            continue;
        }
        let p = enclosing_pattern(d, &members);
        if p.points() != members {
            report.fail(format!("a={a} selects {members:?}, which is not a subcube"));
            return Ok(report);
        }
        classes.insert(BitSet::from_indices(points, members.iter().map(|&u| u as usize)).expect("u < 2^d"));
    }
    if full_scan && classes.len() != 3usize.pow(d as u32) {
        report.fail(format!(
            "expected {} distinct divisor classes, found {}",
            3usize.pow(d as u32),
            classes.len()
        ));
        return Ok(report);
    }
    report
        .notes
        .push(format!("{} divisors scanned, {} distinct classes", divisors.len(), classes.len()));

    let mut classes: Vec<BitSet> = classes.into_iter().collect();
    classes.sort_by_key(|s| s.ones().collect::<Vec<_>>());
    let mut rng = SplitMix64::new(seed);
    let cubes: Vec<CubePattern> = CubePattern::all(d).collect();
    for trial in 0..trials {
        let f: Vec<i64> = (0..points).map(|_| rng.sign() as i64).collect();
        let in_u: Vec<bool> = (0..points).map(|_| rng.coin()).collect();
        let cube_max = cubes
            .iter()
            .map(|p| {
                p.points()
                    .into_iter()
                    .filter(|&u| in_u[u as usize])
                    .map(|u| f[u as usize])
                    .sum::<i64>()
                    .abs()
            })
            .max()
            .unwrap_or(0);
        let divisor_max = classes
            .iter()
            .map(|c| c.ones().filter(|&u| in_u[u]).map(|u| f[u]).sum::<i64>().abs())
            .max()
            .unwrap_or(0);
        if cube_max != divisor_max {
            report.fail(format!(
                "trial {trial}: subcube maximum {cube_max}, progression maximum {divisor_max}"
            ));
            break;
        }
    }
    Ok(report)
}

/// Checks `Σ_W det(A|_W)² = det(A·Aᵀ)` over all maximal column subsets.
pub fn check_binet_cauchy(matrix: &SignMatrix) -> Result<CheckReport> {
    let (m, n) = (matrix.rows(), matrix.cols());
    check_cap("column subsets", binomial(n as u64, m as u64), 10_000_000)?;
    let mut sum = BigInt::zero();
    let mut count = 0u64;
    let rows: Vec<usize> = (0..m).collect();
    for_each_maximal_minor(matrix, &rows, |_, det| {
        sum += BigInt::from(det) * BigInt::from(det);
        count += 1;
        true
    });
    let gram = det_exact(&matrix.gram())?;
    let mut report = CheckReport::new("binet_cauchy", count);
    if sum != gram {
        report.fail(format!("sum of squared minors {sum} != det(A A^T) {gram}"));
    }
    report.notes.push(format!("det(A A^T) = {gram}"));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AveragingReport {
    pub d: usize,
    pub k: usize,
    /// Rows `M = C(d,k)`.
    pub m: usize,
    /// Columns `N = 2^d`.
    pub n: usize,
    pub best: DetSearchOutcome,
    /// `√N·C(N,M)^{−1/(2M)}`.
    pub averaging_bound: f64,
    /// `√(M/e)`.
    pub entropy_bound: f64,
    pub passed: bool,
}

/// Exhaustive maximal minor of `G_{d,k}` against the averaging chain
/// `max_W |det G|_W|^{1/M} ≥ √N·C(N,M)^{−1/(2M)} ≥ √(M/e)`.
pub fn check_averaging(d: usize, k: usize) -> Result<AveragingReport> {
    let g = gen_characters(d, k)?;
    let (m, n) = (g.rows(), g.cols());
    let averaging_bound = (n as f64).sqrt() * (-ln_binomial(n as u64, m as u64) / (2 * m) as f64).exp();
    let entropy_bound = (m as f64 / std::f64::consts::E).sqrt();
    let best = find_large_det_subset(&g, DetStrategy::Exhaustive, 0, averaging_bound * (1.0 - REL_TOL))?;
    let passed = best.root >= averaging_bound * (1.0 - REL_TOL)
        && averaging_bound >= entropy_bound * (1.0 - REL_TOL);
    Ok(AveragingReport {
        d,
        k,
        m,
        n,
        best,
        averaging_bound,
        entropy_bound,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::gen_embedding;
    use crate::generators::gen_sylvester;
    use num_traits::Signed;

    #[test]
    fn sylvester_two_certificate() {
        let h = gen_sylvester(2).unwrap();
        let cert = detlb_certificate(&h, 4, CertStrategy::Exhaustive, 0).unwrap();
        assert_eq!(cert.k, 4);
        assert_eq!(cert.det.abs(), BigInt::from(16));
        assert_eq!(cert.bound, 1.0);
        assert!(verify_certificate(&h, &cert).unwrap().passed);
    }

    #[test]
    fn g21_certificate() {
        let g = gen_characters(2, 1).unwrap();
        let cert = detlb_certificate(&g, 2, CertStrategy::Exhaustive, 0).unwrap();
        assert_eq!(cert.k, 2);
        assert_eq!(cert.det.abs(), BigInt::from(2));
        assert!((cert.bound - 0.7071067811865476).abs() < 1e-11);
        assert_eq!(cert.row_subset, [0, 1]);
        assert_eq!(cert.col_subset, [0, 1]);
    }

    #[test]
    fn one_by_one() {
        let a = SignMatrix::from_rows(&[vec![1]]).unwrap();
        let cert = detlb_certificate(&a, 1, CertStrategy::Exhaustive, 0).unwrap();
        assert_eq!((cert.k, cert.bound), (1, 0.5));
    }

    #[test]
    fn zero_matrix_gives_vacuous_bound() {
        let a = SignMatrix::new(2, 2, vec![0; 4]).unwrap();
        let cert = detlb_certificate(&a, 2, CertStrategy::Exhaustive, 0).unwrap();
        assert_eq!(cert.bound, 0.0);
        assert!(verify_certificate(&a, &cert).unwrap().passed);
    }

    #[test]
    fn corrupted_certificates() {
        let h = gen_sylvester(2).unwrap();
        let mut cert = detlb_certificate(&h, 4, CertStrategy::Exhaustive, 0).unwrap();
        cert.det += 1;
        let r = verify_certificate(&h, &cert).unwrap();
        assert!(!r.passed);
        assert!(r.detail.contains("det mismatch"));
        cert.k = 0;
        assert!(matches!(verify_certificate(&h, &cert), Err(Error::Malformed(_))));
    }

    #[test]
    fn kmax_validation() {
        let g = gen_characters(2, 1).unwrap();
        assert!(detlb_certificate(&g, 0, CertStrategy::Exhaustive, 0).is_err());
        assert!(detlb_certificate(&g, 3, CertStrategy::Exhaustive, 0).is_err());
    }

    #[test]
    fn greedy_reaches_full_hadamard_order() {
        for m in 0..=6u32 {
            let h = gen_sylvester(m).unwrap();
            let cert = detlb_certificate(&h, 1 << m, CertStrategy::Greedy { restarts: 2 }, 0).unwrap();
            let target = 0.5 * 2f64.powf(m as f64 / 2.0);
            assert!(cert.bound >= target * (1.0 - REL_TOL), "m={m}: {}", cert.bound);
            assert!(verify_certificate(&h, &cert).unwrap().passed);
        }
    }

    #[test]
    fn round_down_twelve_digits() {
        assert_eq!(round_down_sig(1.0, 12), 1.0);
        assert_eq!(round_down_sig(0.7071067811865476, 12), 0.707106781186);
        assert_eq!(round_down_sig(123456.78901234567, 12), 123456.789012);
    }

    #[test]
    fn char_decomposition_examples() {
        let v = CharacterIndex::new(2, 0b10).unwrap();
        assert!(check_char_decomposition(&v).unwrap().passed);
        let terms = expansion_terms(&v);
        let described: Vec<(String, i64)> = terms.iter().map(|(p, s)| (p.to_string(), *s)).collect();
        assert_eq!(described, [("0*".to_string(), 1), ("1*".to_string(), -1)]);
        let zero = CharacterIndex::new(5, 0).unwrap();
        assert!(check_char_decomposition(&zero).unwrap().passed);
        for v in CharacterIndex::of_weight(8, 1) {
            let r = check_char_decomposition(&v).unwrap();
            assert!(r.passed);
            assert_eq!(r.trials, 256);
        }
    }

    #[test]
    fn transfer_small() {
        let r = check_transfer(2, 1, 100, 0).unwrap();
        assert!(r.passed, "{}", r.detail);
        assert!(r.notes.contains(&"2 <= 2*1".to_string()), "{:?}", r.notes);
        assert!(check_transfer(3, 1, 100, 0).unwrap().passed);
        assert!(check_transfer(5, 0, 50, 1).unwrap().passed);
        assert!(check_transfer(13, 1, 1, 0).is_err());
        assert!(check_transfer(3, 4, 1, 0).is_err());
    }

    #[test]
    fn embedding_small() {
        for d in 1..=3 {
            let r = check_embedding(&gen_embedding(d).unwrap(), 100, 0).unwrap();
            assert!(r.passed, "d={d}: {}", r.detail);
        }
        assert!(check_embedding(&gen_embedding(9).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn binet_cauchy_g41() {
        let r = check_binet_cauchy(&gen_characters(4, 1).unwrap()).unwrap();
        assert!(r.passed, "{}", r.detail);
        assert_eq!(r.trials, 1820);
    }

    #[test]
    fn averaging_weight_zero_is_tight() {
        let r = check_averaging(3, 0).unwrap();
        assert!(r.passed);
        assert!((r.averaging_bound - 1.0).abs() < 1e-12);
        assert_eq!(r.best.root, 1.0);
    }
}
