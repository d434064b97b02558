//! Combinatorial discrepancy toolkit.
//!
//! Set systems and sign matrices with restriction and discrepancy evaluation,
//! generators for subcube systems, weight-k character matrices, homogeneous
//! arithmetic progressions, Sylvester–Hadamard matrices and the prime-product
//! embedding of subcubes into divisibility, plus exact solvers, determinant
//! lower-bound certificates and constructive colorings.
//!
//! Conventions shared by every module:
//!
//! * A point `u ∈ {0,1}^d` is stored as the integer `Σ u_i·2^(d−i)`, i.e. `u₁`
//!   is the most significant bit. The same layout is used for character
//!   indices `v`.
//! * Subcube patterns `v ∈ {0,1,*}^d` are ordered as base-3 strings with
//!   `0 < 1 < *`, first symbol most significant.
//! * Homogeneous progressions are ordered by `(a, k)`.

pub mod bitset;
pub mod bounds;
pub mod det;
pub mod embedding;
mod error;
pub mod exact;
pub mod generators;
pub mod heuristics;
pub mod rng;
pub mod system;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use system::{Coloring, DiscrepancyReport, HapMode, NamedSet, SetSystem, SignMatrix};
