//! Exact discrepancy and hereditary discrepancy by branch and bound.
//!
//! Columns are branched in order of decreasing support (ties by index), `+1`
//! before `−1`. A row with partial sum `s` and `r` unassigned nonzero entries
//! ends with `|sum| ≥ |s| − r`, so a node is cut as soon as that bound reaches
//! the incumbent. Only strictly better leaves replace the incumbent, which
//! makes the reported witness the first optimum in the canonical DFS order.

use crate::bitset::BitSet;
use crate::error::{check_cap, Error, Result};
use crate::system::{Coloring, SignMatrix};

pub const MAX_DISC_COLS: usize = 30;
pub const MAX_HERDISC_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Coloring(Coloring),
    Subset(BitSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: u64,
    pub witness: Witness,
    pub nodes_explored: u64,
}

impl ExactResult {
    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.witness {
            Witness::Coloring(c) => Some(c),
            Witness::Subset(_) => None,
        }
    }

    pub fn subset(&self) -> Option<&BitSet> {
        match &self.witness {
            Witness::Subset(s) => Some(s),
            Witness::Coloring(_) => None,
        }
    }
}

struct Search {
    /// Column index at each depth.
    order: Vec<usize>,
    /// Nonzero entries `(row, sign)` of the column branched at each depth.
    entries: Vec<Vec<(usize, i64)>>,
    sums: Vec<i64>,
    remaining: Vec<i64>,
    assign: Vec<i8>,
    /// Incumbent value; leaves must beat it strictly.
    best: i64,
    best_assign: Option<Vec<i8>>,
    /// No coloring can do better than this.
    floor: i64,
    /// Stop at the first leaf beating the initial incumbent.
    first_only: bool,
    done: bool,
    nodes: u64,
}

impl Search {
    fn new(matrix: &SignMatrix, incumbent: i64, first_only: bool) -> Self {
        let (rows, cols) = (matrix.rows(), matrix.cols());
        let mut order: Vec<usize> = (0..cols).collect();
        let support: Vec<usize> = (0..cols).map(|c| matrix.column_support(c)).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(support[c]), c));
        let entries = order
            .iter()
            .map(|&c| {
                (0..rows)
                    .filter(|&r| matrix.get(r, c) != 0)
                    .map(|r| (r, matrix.get(r, c) as i64))
                    .collect()
            })
            .collect();
        let remaining: Vec<i64> = (0..rows)
            .map(|r| matrix.row(r).iter().filter(|&&e| e != 0).count() as i64)
            .collect();
        // A ±1 combination of an odd number of ±1 entries is odd.
        let floor = remaining.iter().any(|&r| r % 2 == 1) as i64;
        Search {
            order,
            entries,
            sums: vec![0; rows],
            remaining,
            assign: vec![0; cols],
            best: incumbent,
            best_assign: None,
            floor,
            first_only,
            done: false,
            nodes: 0,
        }
    }

    fn dfs(&mut self, depth: usize) {
        self.nodes += 1;
        if depth == self.order.len() {
            let value = self.sums.iter().map(|s| s.abs()).max().unwrap_or(0);
            if value < self.best {
                self.best = value;
                self.best_assign = Some(self.assign.clone());
                if self.first_only || value <= self.floor {
                    self.done = true;
                }
            }
            return;
        }
        let col = self.order[depth];
        for color in [1i64, -1] {
            let mut feasible = true;
            for &(r, a) in &self.entries[depth] {
                self.sums[r] += color * a;
                self.remaining[r] -= 1;
                if self.sums[r].abs() - self.remaining[r] >= self.best {
                    feasible = false;
                }
            }
            if feasible {
                self.assign[col] = color as i8;
                self.dfs(depth + 1);
            }
            for &(r, a) in &self.entries[depth] {
                self.sums[r] -= color * a;
                self.remaining[r] += 1;
            }
            if self.done {
                return;
            }
        }
    }
}

/// `disc(A) = min_x ‖A·x‖_∞` over all ±1 colorings of at most 30 columns.
pub fn disc_exact(matrix: &SignMatrix) -> Result<ExactResult> {
    check_cap("columns", matrix.cols() as u128, MAX_DISC_COLS as u128)?;
    let mut search = Search::new(matrix, i64::MAX, false);
    search.dfs(0);
    let assign = search
        .best_assign
        .expect("an unbounded incumbent is always improved");
    Ok(ExactResult {
        value: search.best as u64,
        witness: Witness::Coloring(Coloring::from_signs_unchecked(assign)),
        nodes_explored: search.nodes,
    })
}

/// A coloring with value at most `bound`, if one exists.
fn disc_at_most(matrix: &SignMatrix, bound: u64) -> (Option<Coloring>, u64) {
    let mut search = Search::new(matrix, bound as i64 + 1, true);
    search.dfs(0);
    (
        search.best_assign.map(Coloring::from_signs_unchecked),
        search.nodes,
    )
}

/// `herdisc(A) = max_W disc(A|_W)` over all column subsets, `cols ≤ cap ≤ 16`.
///
/// Subsets are scanned in increasing integer order (bit `j` = column `j`), so
/// the witness is the smallest subset attaining the maximum. A subset is
/// solved exactly only when no coloring reaches the current best value.
pub fn herdisc_exact(matrix: &SignMatrix, cap: usize) -> Result<ExactResult> {
    if cap > MAX_HERDISC_CAP {
        return Err(Error::InvalidArgument(format!(
            "cap {cap} exceeds the hard limit {MAX_HERDISC_CAP}"
        )));
    }
    let n = matrix.cols();
    check_cap("ground size", n as u128, cap as u128)?;
    let ceiling = matrix.max_row_support() as u64;
    let mut best = 0u64;
    let mut best_set = 0u64;
    let mut nodes = 0u64;
    for mask in 1u64..1 << n {
        if best >= ceiling {
            break;
        }
        let keep = BitSet::from_mask(n, mask);
        let sub = matrix.restrict_columns(&keep)?;
        let (found, explored) = disc_at_most(&sub, best);
        nodes += explored;
        if found.is_none() {
            let exact = disc_exact(&sub)?;
            nodes += exact.nodes_explored;
            debug_assert!(exact.value > best);
            best = exact.value;
            best_set = mask;
        }
    }
    Ok(ExactResult {
        value: best,
        witness: Witness::Subset(BitSet::from_mask(n, best_set)),
        nodes_explored: nodes,
    })
}
