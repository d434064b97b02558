//! Prime-product embedding of the subcube system into divisibility.
//!
//! With `p_{1,0} < p_{1,1} < … < p_{d,0} < p_{d,1}` the first `2d` primes, a
//! point `u` maps to `b_u = Π p_{i,u_i}` and a pattern `v` to
//! `a_v = Π_{v_i ≠ *} p_{i,v_i}`. Then `a_v | b_u` exactly when `u ∈ S_v`,
//! so homogeneous progressions restricted to `{b_u}` reproduce `𝒮^d`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{check_range, Error, Result};
use crate::generators::{CubePattern, PatternSymbol};

pub const MAX_EMBED_DIM: usize = 12;

/// First `count` primes, by a sieve whose bound doubles until enough are found.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 16usize;
    loop {
        let primes = sieve(limit);
        if primes.len() >= count {
            return primes[..count].to_vec();
        }
        limit *= 2;
    }
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingWitness {
    d: usize,
    primes: Vec<u64>,
    /// Indexed by the canonical point index of `u`.
    b_of_u: Vec<BigUint>,
    /// Indexed by the base-3 index of `v`.
    a_of_v: Vec<BigUint>,
    n: BigUint,
}

impl EmbeddingWitness {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `p_{i,bit}` for 1-based coordinate `i`.
    pub fn prime(&self, i: usize, bit: bool) -> u64 {
        self.primes[2 * (i - 1) + bit as usize]
    }

    pub fn b(&self, u: u64) -> &BigUint {
        &self.b_of_u[u as usize]
    }

    pub fn a(&self, v: &CubePattern) -> &BigUint {
        &self.a_of_v[v.index() as usize]
    }

    pub fn b_values(&self) -> &[BigUint] {
        &self.b_of_u
    }

    pub fn a_values(&self) -> &[BigUint] {
        &self.a_of_v
    }

    /// The largest element, `b` at the all-ones point.
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// Rebuilds a witness from serialized parts, checking every field against
    /// a fresh construction.
    pub fn from_parts(
        d: usize,
        primes: Vec<u64>,
        b_of_u: Vec<BigUint>,
        a_of_v: Vec<BigUint>,
        n: BigUint,
    ) -> Result<Self> {
        let fresh = gen_embedding(d)?;
        if primes != fresh.primes {
            return Err(Error::Invariant(
                "primes must be the first 2d primes in increasing order".into(),
            ));
        }
        if b_of_u != fresh.b_of_u {
            return Err(Error::Invariant("b_u must equal the product of p_{i,u_i}".into()));
        }
        if a_of_v != fresh.a_of_v {
            return Err(Error::Invariant(
                "a_v must equal the product of p_{i,v_i} over fixed coordinates".into(),
            ));
        }
        if n != fresh.n {
            return Err(Error::Invariant("n must equal b at the all-ones point".into()));
        }
        Ok(fresh)
    }
}

/// Builds the witness for dimension `d` (1 ≤ d ≤ 12).
pub fn gen_embedding(d: usize) -> Result<EmbeddingWitness> {
    check_range("d", d as u64, 1, MAX_EMBED_DIM as u64)?;
    let primes = first_primes(2 * d);
    let prime = |i: usize, bit: bool| primes[2 * (i - 1) + bit as usize];
    let b_of_u: Vec<BigUint> = (0..1u64 << d)
        .map(|u| {
            (1..=d).fold(BigUint::one(), |acc, i| {
                acc * prime(i, u >> (d - i) & 1 == 1)
            })
        })
        .collect();
    let a_of_v: Vec<BigUint> = CubePattern::all(d)
        .map(|v| {
            v.symbols()
                .iter()
                .enumerate()
                .fold(BigUint::one(), |acc, (i, s)| match s {
                    PatternSymbol::Zero => acc * prime(i + 1, false),
                    PatternSymbol::One => acc * prime(i + 1, true),
                    PatternSymbol::Star => acc,
                })
        })
        .collect();
    let n = b_of_u[(1usize << d) - 1].clone();
    Ok(EmbeddingWitness {
        d,
        primes,
        b_of_u,
        a_of_v,
        n,
    })
}
