//! Set systems, sign matrices, colorings and discrepancy evaluation.

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::error::{check_cap, Error, Result};

/// Ground sets are capped so that row sums always fit comfortably in `i64`.
pub const MAX_GROUND: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    pub members: BitSet,
}

/// A family of named subsets of an ordered, labelled ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground: Vec<String>,
    sets: Vec<NamedSet>,
}

impl SetSystem {
    pub fn new(ground: Vec<String>, sets: Vec<NamedSet>) -> Result<Self> {
        check_cap("ground size", ground.len() as u128, MAX_GROUND as u128)?;
        let mut seen = HashSet::with_capacity(ground.len());
        for label in &ground {
            if !seen.insert(label.as_str()) {
                return Err(Error::Invariant(format!("duplicate ground label {label:?}")));
            }
        }
        let mut names = HashSet::with_capacity(sets.len());
        for s in &sets {
            if s.members.len() != ground.len() {
                return Err(Error::LengthMismatch {
                    what: "set bitset",
                    expected: ground.len(),
                    got: s.members.len(),
                });
            }
            if !names.insert(s.name.as_str()) {
                return Err(Error::Invariant(format!("duplicate set name {:?}", s.name)));
            }
        }
        Ok(SetSystem { ground, sets })
    }

    pub fn empty() -> Self {
        SetSystem {
            ground: Vec::new(),
            sets: Vec::new(),
        }
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    pub fn sets(&self) -> &[NamedSet] {
        &self.sets
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Maximum number of sets containing a single ground element.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.ground.len()];
        for s in &self.sets {
            for i in s.members.ones() {
                deg[i] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Restriction to the ground elements marked in `keep`.
    ///
    /// The kept elements stay in their original order and are reindexed
    /// densely; every set is intersected and keeps its name. Sets that become
    /// equal are not merged.
    pub fn restrict(&self, keep: &BitSet) -> Result<SetSystem> {
        if keep.len() != self.ground.len() {
            return Err(Error::LengthMismatch {
                what: "restriction bitset",
                expected: self.ground.len(),
                got: keep.len(),
            });
        }
        let kept: Vec<usize> = keep.ones().collect();
        let mut new_index = vec![usize::MAX; self.ground.len()];
        for (j, &i) in kept.iter().enumerate() {
            new_index[i] = j;
        }
        let ground = kept.iter().map(|&i| self.ground[i].clone()).collect();
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let mut members = BitSet::new(kept.len());
                for i in s.members.ones() {
                    if new_index[i] != usize::MAX {
                        members.insert(new_index[i]);
                    }
                }
                NamedSet {
                    name: s.name.clone(),
                    members,
                }
            })
            .collect();
        Ok(SetSystem { ground, sets })
    }

    /// 0/1 incidence matrix: rows are sets, columns are ground elements.
    pub fn to_matrix(&self) -> SignMatrix {
        let rows = self.sets.len();
        let cols = self.ground.len();
        let mut entries = vec![0i8; rows * cols];
        for (r, s) in self.sets.iter().enumerate() {
            for c in s.members.ones() {
                entries[r * cols + c] = 1;
            }
        }
        SignMatrix {
            rows,
            cols,
            entries,
            row_labels: Some(self.sets.iter().map(|s| s.name.clone()).collect()),
            col_labels: Some(self.ground.clone()),
        }
    }
}

/// Dense matrix with entries in {−1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl SignMatrix {
    /// `entries` is row-major.
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        check_cap("matrix columns", cols as u128, MAX_GROUND as u128)?;
        let expected = rows.checked_mul(cols).ok_or_else(|| {
            Error::InvalidArgument(format!("matrix dimension {rows}×{cols} overflows"))
        })?;
        if entries.len() != expected {
            return Err(Error::LengthMismatch {
                what: "matrix entries",
                expected,
                got: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::Invariant(format!("matrix entry {bad} not in {{-1,0,1}}")));
        }
        Ok(SignMatrix {
            rows,
            cols,
            entries,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                what: "matrix row",
                expected: cols,
                got: r.len(),
            });
        }
        SignMatrix::new(rows.len(), cols, rows.concat())
    }

    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(l) = &row_labels {
            if l.len() != self.rows {
                return Err(Error::LengthMismatch {
                    what: "row labels",
                    expected: self.rows,
                    got: l.len(),
                });
            }
        }
        if let Some(l) = &col_labels {
            if l.len() != self.cols {
                return Err(Error::LengthMismatch {
                    what: "column labels",
                    expected: self.cols,
                    got: l.len(),
                });
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Number of nonzero entries in column `c`.
    pub fn column_support(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c) != 0).count()
    }

    /// Largest number of nonzero entries in any row.
    pub fn max_row_support(&self) -> usize {
        (0..self.rows)
            .map(|r| self.row(r).iter().filter(|&&e| e != 0).count())
            .max()
            .unwrap_or(0)
    }

    /// Column restriction `A|_W`, keeping columns in increasing index order.
    pub fn restrict_columns(&self, keep: &BitSet) -> Result<SignMatrix> {
        if keep.len() != self.cols {
            return Err(Error::LengthMismatch {
                what: "column restriction bitset",
                expected: self.cols,
                got: keep.len(),
            });
        }
        let cols: Vec<usize> = keep.ones().collect();
        Ok(self.select(&(0..self.rows).collect::<Vec<_>>(), &cols))
    }

    /// Submatrix on the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SignMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c));
            }
        }
        SignMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
            row_labels: self
                .row_labels
                .as_ref()
                .map(|l| rows.iter().map(|&r| l[r].clone()).collect()),
            col_labels: self
                .col_labels
                .as_ref()
                .map(|l| cols.iter().map(|&c| l[c].clone()).collect()),
        }
    }

    /// Integer copy of the submatrix on `rows × cols`.
    pub fn int_submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self.get(r, c) as i64).collect())
            .collect()
    }

    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&e| e as i64).collect())
            .collect()
    }

    /// Gram matrix `A·Aᵀ`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let mut g = vec![vec![0i64; self.rows]; self.rows];
        for i in 0..self.rows {
            for j in i..self.rows {
                let dot: i64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(&a, &b)| (a as i64) * (b as i64))
                    .sum();
                g[i][j] = dot;
                g[j][i] = dot;
            }
        }
        g
    }

    pub fn transpose(&self) -> SignMatrix {
        let mut entries = vec![0i8; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        SignMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }
}

/// A ±1 assignment to a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    values: Vec<i8>,
}

impl Coloring {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v != 1 && **v != -1) {
            return Err(Error::Invariant(format!(
                "coloring entry {i} is {v}, expected +1 or -1"
            )));
        }
        Ok(Coloring { values })
    }

    pub fn all_ones(len: usize) -> Self {
        Coloring {
            values: vec![1; len],
        }
    }

    pub(crate) fn from_signs_unchecked(values: Vec<i8>) -> Self {
        debug_assert!(values.iter().all(|&v| v == 1 || v == -1));
        Coloring { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, i: usize) -> i8 {
        self.values[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.values[i] = -self.values[i];
    }

    /// Restriction to the positions set in `keep`, in increasing order.
    pub fn restrict(&self, keep: &BitSet) -> Coloring {
        Coloring {
            values: keep.ones().map(|i| self.values[i]).collect(),
        }
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().map(|&v| v as i64).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// Maximum absolute row sum; 0 for a matrix without rows.
    pub value: u64,
    /// Smallest row index attaining `value`; `None` when there are no rows.
    pub argmax_row: Option<usize>,
    pub per_row: Option<Vec<u64>>,
}

/// `‖A·x‖_∞` for a fixed coloring, with the first attaining row.
pub fn eval_discrepancy(matrix: &SignMatrix, coloring: &Coloring) -> Result<DiscrepancyReport> {
    if coloring.len() != matrix.cols() {
        return Err(Error::LengthMismatch {
            what: "coloring",
            expected: matrix.cols(),
            got: coloring.len(),
        });
    }
    let per_row: Vec<u64> = (0..matrix.rows())
        .map(|r| {
            matrix
                .row(r)
                .iter()
                .zip(coloring.values())
                .map(|(&a, &x)| (a as i64) * (x as i64))
                .sum::<i64>()
                .unsigned_abs()
        })
        .collect();
    let (value, argmax_row) = first_max(&per_row);
    Ok(DiscrepancyReport {
        value,
        argmax_row,
        per_row: Some(per_row),
    })
}

fn first_max(values: &[u64]) -> (u64, Option<usize>) {
    let mut best: Option<(u64, usize)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, i));
        }
    }
    best.map_or((0, None), |(v, i)| (v, Some(i)))
}

/// Which homogeneous progressions `{a, 2a, …, ka}` over `[n]` form the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HapMode {
    /// Every `(a, k)` with `1 ≤ k ≤ ⌊n/a⌋`.
    Prefix,
    /// Only the full set of multiples, `k = ⌊n/a⌋`.
    Multiples,
}

impl HapMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HapMode::Prefix => "prefix",
            HapMode::Multiples => "multiples",
        }
    }
}

impl std::str::FromStr for HapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prefix" => Ok(HapMode::Prefix),
            "multiples" => Ok(HapMode::Multiples),
            other => Err(Error::InvalidArgument(format!("unknown HAP mode {other:?}"))),
        }
    }
}

/// Discrepancy of a coloring of `[n]` over homogeneous progressions, streamed.
///
/// Runs in `O(Σ_a n/a)` without materialising the system. Row indices in the
/// report follow the `(a, k)` order of the generated system, so the result is
/// identical to [`eval_discrepancy`] on the materialised incidence matrix
/// (apart from `per_row`, which is not produced).
pub fn hap_disc_stream(n: usize, mode: HapMode, coloring: &Coloring) -> Result<DiscrepancyReport> {
    if n == 0 {
        return Err(Error::OutOfRange {
            param: "n",
            value: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    if coloring.len() != n {
        return Err(Error::LengthMismatch {
            what: "coloring",
            expected: n,
            got: coloring.len(),
        });
    }
    let f = coloring.values();
    let mut best: Option<(u64, usize)> = None;
    let mut offset = 0usize;
    for a in 1..=n {
        let count = n / a;
        let mut s = 0i64;
        match mode {
            HapMode::Prefix => {
                for k in 1..=count {
                    s += f[k * a - 1] as i64;
                    let v = s.unsigned_abs();
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, offset + k - 1));
                    }
                }
                offset += count;
            }
            HapMode::Multiples => {
                for k in 1..=count {
                    s += f[k * a - 1] as i64;
                }
                let v = s.unsigned_abs();
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, a - 1));
                }
            }
        }
    }
    let (value, argmax_row) = best.map_or((0, None), |(v, i)| (v, Some(i)));
    Ok(DiscrepancyReport {
        value,
        argmax_row,
        per_row: None,
    })
}
