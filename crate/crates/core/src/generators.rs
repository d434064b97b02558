//! Instance families: subcube systems, character matrices, homogeneous
//! progressions and Sylvester–Hadamard matrices.

use std::fmt;
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::error::{check_cap, check_range, Error, Result};
use crate::system::{HapMode, NamedSet, SetSystem, SignMatrix};

/// Largest dimension accepted by the cube generators.
pub const MAX_CUBE_DIM: usize = 16;
/// Largest dimension for which the full subcube system is materialised
/// (`3^d` dense sets over `2^d` points).
pub const MAX_SUBCUBE_MATERIALIZE: usize = 10;
/// Entry budget for materialised character matrices.
pub const MAX_CHARACTER_ENTRIES: u128 = 1 << 27;
pub const MAX_HAP_PREFIX_N: usize = 5000;
pub const MAX_HAP_MULTIPLES_N: usize = 20_000;
pub const MAX_SYLVESTER_ORDER: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternSymbol {
    Zero,
    One,
    Star,
}

impl PatternSymbol {
    fn as_char(self) -> char {
        match self {
            PatternSymbol::Zero => '0',
            PatternSymbol::One => '1',
            PatternSymbol::Star => '*',
        }
    }
}

/// A pattern `v ∈ {0,1,*}^d` naming the subcube `S_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubePattern {
    symbols: Vec<PatternSymbol>,
}

impl CubePattern {
    pub fn new(symbols: Vec<PatternSymbol>) -> Self {
        CubePattern { symbols }
    }

    pub fn full(d: usize) -> Self {
        CubePattern {
            symbols: vec![PatternSymbol::Star; d],
        }
    }

    /// Pattern number `index` in base-3 order (`0 < 1 < *`, first symbol most significant).
    pub fn from_index(d: usize, mut index: u64) -> Self {
        let mut symbols = vec![PatternSymbol::Zero; d];
        for slot in symbols.iter_mut().rev() {
            *slot = match index % 3 {
                0 => PatternSymbol::Zero,
                1 => PatternSymbol::One,
                _ => PatternSymbol::Star,
            };
            index /= 3;
        }
        CubePattern { symbols }
    }

    pub fn index(&self) -> u64 {
        self.symbols.iter().fold(0u64, |acc, s| {
            acc * 3
                + match s {
                    PatternSymbol::Zero => 0,
                    PatternSymbol::One => 1,
                    PatternSymbol::Star => 2,
                }
        })
    }

    /// All `3^d` patterns in base-3 order.
    pub fn all(d: usize) -> impl Iterator<Item = CubePattern> {
        (0..3u64.pow(d as u32)).map(move |i| CubePattern::from_index(d, i))
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[PatternSymbol] {
        &self.symbols
    }

    pub fn stars(&self) -> usize {
        self.symbols
            .iter()
            .filter(|&&s| s == PatternSymbol::Star)
            .count()
    }

    /// `(mask, value)` in point layout: `u ∈ S_v` iff `u & mask == value`.
    pub fn mask_value(&self) -> (u64, u64) {
        let d = self.symbols.len();
        let mut mask = 0u64;
        let mut value = 0u64;
        for (i, s) in self.symbols.iter().enumerate() {
            let bit = 1u64 << (d - 1 - i);
            match s {
                PatternSymbol::Zero => mask |= bit,
                PatternSymbol::One => {
                    mask |= bit;
                    value |= bit;
                }
                PatternSymbol::Star => {}
            }
        }
        (mask, value)
    }

    pub fn contains(&self, u: u64) -> bool {
        let (mask, value) = self.mask_value();
        u & mask == value
    }

    /// Points of `S_v` in increasing order.
    pub fn points(&self) -> Vec<u64> {
        let (mask, value) = self.mask_value();
        let d = self.symbols.len();
        (0..1u64 << d).filter(|u| u & mask == value).collect()
    }
}

impl fmt::Display for CubePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl FromStr for CubePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '0' => Ok(PatternSymbol::Zero),
                '1' => Ok(PatternSymbol::One),
                '*' => Ok(PatternSymbol::Star),
                other => Err(Error::InvalidArgument(format!(
                    "pattern symbol {other:?} not in {{0,1,*}}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CubePattern { symbols })
    }
}

/// Character index `v ∈ F_2^d`; `χ_v(u) = (−1)^{⟨v,u⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacterIndex {
    d: usize,
    v: u64,
}

impl CharacterIndex {
    pub fn new(d: usize, v: u64) -> Result<Self> {
        check_range("d", d as u64, 0, 63)?;
        if v >> d != 0 {
            return Err(Error::InvalidArgument(format!(
                "character index {v} does not fit in {d} bits"
            )));
        }
        Ok(CharacterIndex { d, v })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn bits(&self) -> u64 {
        self.v
    }

    pub fn weight(&self) -> usize {
        self.v.count_ones() as usize
    }

    pub fn eval(&self, u: u64) -> i8 {
        if (self.v & u).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Coordinates `i₁ < … < i_k` (1-based) where `v` has a one.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.d)
            .filter(|&i| self.v >> (self.d - i) & 1 == 1)
            .collect()
    }

    /// All indices of weight `k` in increasing integer order.
    pub fn of_weight(d: usize, k: usize) -> impl Iterator<Item = CharacterIndex> {
        (0..1u64 << d)
            .filter(move |v| v.count_ones() as usize == k)
            .map(move |v| CharacterIndex { d, v })
    }
}

impl fmt::Display for CharacterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", point_label(self.d, self.v))
    }
}

/// Binary label `u₁u₂…u_d` of a cube point.
pub fn point_label(d: usize, u: u64) -> String {
    (0..d)
        .map(|i| if u >> (d - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// The extension `v(w)`: `w_ℓ` at the ℓ-th one of `v`, `*` everywhere else.
pub fn extend_pattern(v: &CharacterIndex, w: &[bool]) -> Result<CubePattern> {
    let support = v.support();
    if w.len() != support.len() {
        return Err(Error::LengthMismatch {
            what: "extension word",
            expected: support.len(),
            got: w.len(),
        });
    }
    let mut symbols = vec![PatternSymbol::Star; v.dim()];
    for (&i, &bit) in support.iter().zip(w) {
        symbols[i - 1] = if bit {
            PatternSymbol::One
        } else {
            PatternSymbol::Zero
        };
    }
    Ok(CubePattern { symbols })
}

/// The member of `S_p` with every `*` replaced by 0.
pub fn representative(p: &CubePattern) -> u64 {
    p.mask_value().1
}

fn cube_ground(d: usize) -> Vec<String> {
    (0..1u64 << d).map(|u| point_label(d, u)).collect()
}

/// The subcube system `𝒮^d`: one set per pattern, in base-3 order.
pub fn gen_subcubes(d: usize) -> Result<SetSystem> {
    check_range("d", d as u64, 1, MAX_CUBE_DIM as u64)?;
    check_cap("subcube dimension", d as u128, MAX_SUBCUBE_MATERIALIZE as u128)?;
    let n = 1usize << d;
    let sets = CubePattern::all(d)
        .map(|p| {
            let mut members = BitSet::new(n);
            for u in p.points() {
                members.insert(u as usize);
            }
            NamedSet {
                name: p.to_string(),
                members,
            }
        })
        .collect();
    SetSystem::new(cube_ground(d), sets)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Character matrix `G_{d,k}`: rows `χ_v` for `|v| = k` (increasing `v`),
/// columns the points of `{0,1}^d` in canonical order.
pub fn gen_characters(d: usize, k: usize) -> Result<SignMatrix> {
    check_range("d", d as u64, 1, MAX_CUBE_DIM as u64)?;
    check_range("k", k as u64, 0, d as u64)?;
    let n = 1u64 << d;
    check_cap(
        "character matrix entries",
        binomial(d as u64, k as u64) * n as u128,
        MAX_CHARACTER_ENTRIES,
    )?;
    let rows: Vec<CharacterIndex> = CharacterIndex::of_weight(d, k).collect();
    let mut entries = Vec::with_capacity(rows.len() * n as usize);
    for v in &rows {
        entries.extend((0..n).map(|u| v.eval(u)));
    }
    SignMatrix::new(rows.len(), n as usize, entries)?.with_labels(
        Some(rows.iter().map(|v| v.to_string()).collect()),
        Some(cube_ground(d)),
    )
}

/// The default character weight `d/8`, defined only when `8 | d`.
pub fn default_weight(d: usize) -> Option<usize> {
    (d % 8 == 0 && d > 0).then_some(d / 8)
}

/// Homogeneous progressions over `[n]`, ground labels `"1"…"n"`.
///
/// Prefix sets are named `"a:k"`, multiples sets `"a"`.
pub fn gen_hap(n: usize, mode: HapMode) -> Result<SetSystem> {
    let cap = match mode {
        HapMode::Prefix => MAX_HAP_PREFIX_N,
        HapMode::Multiples => MAX_HAP_MULTIPLES_N,
    };
    check_range("n", n as u64, 1, cap as u64)?;
    let ground = (1..=n).map(|i| i.to_string()).collect();
    let mut sets = Vec::new();
    for a in 1..=n {
        let count = n / a;
        match mode {
            HapMode::Prefix => {
                let mut members = BitSet::new(n);
                for k in 1..=count {
                    members.insert(k * a - 1);
                    sets.push(NamedSet {
                        name: format!("{a}:{k}"),
                        members: members.clone(),
                    });
                }
            }
            HapMode::Multiples => {
                let members = BitSet::from_indices(n, (1..=count).map(|k| k * a - 1))
                    .expect("multiples lie in [n]");
                sets.push(NamedSet {
                    name: a.to_string(),
                    members,
                });
            }
        }
    }
    SetSystem::new(ground, sets)
}

/// Sylvester–Hadamard matrix of order `2^m`: `H[i][j] = (−1)^{popcount(i & j)}`.
pub fn gen_sylvester(m: u32) -> Result<SignMatrix> {
    check_range("m", m as u64, 0, MAX_SYLVESTER_ORDER as u64)?;
    let n = 1usize << m;
    let entries = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if (i & j).count_ones() % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    SignMatrix::new(n, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(s: &SetSystem) -> Vec<usize> {
        s.sets().iter().map(|x| x.members.count()).collect()
    }

    #[test]
    fn subcubes_d1() {
        let s = gen_subcubes(1).unwrap();
        assert_eq!(s.ground(), ["0", "1"]);
        let names: Vec<_> = s.sets().iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["0", "1", "*"]);
        assert_eq!(sizes(&s), [1, 1, 2]);
    }

    #[test]
    fn subcubes_d2_sizes() {
        let s = gen_subcubes(2).unwrap();
        let names: Vec<_> = s.sets().iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["00", "01", "0*", "10", "11", "1*", "*0", "*1", "**"]);
        let mut sz = sizes(&s);
        sz.sort();
        assert_eq!(sz, [1, 1, 1, 1, 2, 2, 2, 2, 4]);
    }

    #[test]
    fn subcubes_d3_size_counts() {
        let s = gen_subcubes(3).unwrap();
        assert_eq!(s.num_sets(), 27);
        let sz = sizes(&s);
        let count = |k| sz.iter().filter(|&&x| x == k).count();
        assert_eq!((count(1), count(2), count(4), count(8)), (8, 12, 6, 1));
    }

    #[test]
    fn subcube_range_errors() {
        assert!(matches!(gen_subcubes(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(gen_subcubes(17), Err(Error::OutOfRange { .. })));
        assert!(matches!(gen_subcubes(11), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn characters_d2_k1() {
        let g = gen_characters(2, 1).unwrap();
        assert_eq!(g.to_rows(), vec![vec![1, -1, 1, -1], vec![1, 1, -1, -1]]);
        assert_eq!(g.row_labels().unwrap(), ["01", "10"]);
    }

    #[test]
    fn characters_weight_zero_is_all_ones() {
        for d in 1..6 {
            let g = gen_characters(d, 0).unwrap();
            assert_eq!(g.rows(), 1);
            assert!(g.row(0).iter().all(|&e| e == 1));
        }
    }

    #[test]
    fn characters_d8_k1_gram() {
        let g = gen_characters(8, 1).unwrap();
        assert_eq!((g.rows(), g.cols()), (8, 256));
        let gram = g.gram();
        for (i, row) in gram.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { 256 } else { 0 });
            }
        }
    }

    #[test]
    fn characters_range_errors() {
        assert!(gen_characters(3, 4).is_err());
        assert!(gen_characters(0, 0).is_err());
        assert!(matches!(gen_characters(16, 8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn default_weight_only_for_multiples_of_eight() {
        assert_eq!(default_weight(8), Some(1));
        assert_eq!(default_weight(16), Some(2));
        assert_eq!(default_weight(6), None);
    }

    #[test]
    fn hap_prefix_four() {
        let s = gen_hap(4, HapMode::Prefix).unwrap();
        let sets: Vec<Vec<usize>> = s
            .sets()
            .iter()
            .map(|x| x.members.ones().map(|i| i + 1).collect())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 2, 3],
                vec![1, 2, 3, 4],
                vec![2],
                vec![2, 4],
                vec![3],
                vec![4]
            ]
        );
    }

    #[test]
    fn hap_multiples_six() {
        let s = gen_hap(6, HapMode::Multiples).unwrap();
        assert_eq!(sizes(&s), [6, 3, 2, 1, 1, 1]);
        assert_eq!(s.to_matrix().rows(), 6);
    }

    #[test]
    fn hap_n1_both_modes() {
        for mode in [HapMode::Prefix, HapMode::Multiples] {
            let s = gen_hap(1, mode).unwrap();
            assert_eq!(s.num_sets(), 1);
            assert_eq!(sizes(&s), [1]);
        }
    }

    #[test]
    fn hap_caps() {
        assert!(gen_hap(0, HapMode::Prefix).is_err());
        assert!(gen_hap(5001, HapMode::Prefix).is_err());
    }

    #[test]
    fn sylvester_small() {
        assert_eq!(gen_sylvester(0).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(
            gen_sylvester(1).unwrap().to_rows(),
            vec![vec![1, 1], vec![1, -1]]
        );
        assert!(gen_sylvester(13).is_err());
    }

    #[test]
    fn extension_examples() {
        let v = CharacterIndex::new(2, 0b10).unwrap();
        assert_eq!(extend_pattern(&v, &[false]).unwrap().to_string(), "0*");
        assert_eq!(extend_pattern(&v, &[true]).unwrap().to_string(), "1*");
        let zero = CharacterIndex::new(5, 0).unwrap();
        assert_eq!(extend_pattern(&zero, &[]).unwrap().to_string(), "*****");
        assert!(extend_pattern(&v, &[true, false]).is_err());
    }

    #[test]
    fn representative_examples() {
        assert_eq!(representative(&"0*".parse().unwrap()), 0b00);
        assert_eq!(representative(&"1*".parse().unwrap()), 0b10);
        assert_eq!(representative(&CubePattern::full(4)), 0);
    }

    #[test]
    fn pattern_index_round_trip() {
        for d in 0..5 {
            for (i, p) in CubePattern::all(d).enumerate() {
                assert_eq!(p.index(), i as u64);
                assert_eq!(p.to_string().parse::<CubePattern>().unwrap(), p);
            }
        }
        assert!("01x".parse::<CubePattern>().is_err());
    }

    #[test]
    fn extensions_partition_the_cube() {
        for d in 1..=6 {
            for v in (0..1u64 << d).map(|v| CharacterIndex::new(d, v).unwrap()) {
                let k = v.weight();
                let mut cover = vec![0u32; 1 << d];
                for w in 0..1u64 << k {
                    let bits: Vec<bool> = (0..k).map(|l| w >> (k - 1 - l) & 1 == 1).collect();
                    for u in extend_pattern(&v, &bits).unwrap().points() {
                        cover[u as usize] += 1;
                    }
                }
                assert!(cover.iter().all(|&c| c == 1), "d={d} v={v}");
            }
        }
    }
}
