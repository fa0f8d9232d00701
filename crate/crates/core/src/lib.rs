//! Matchings between finite subsets of abelian groups and between
//! subspaces of finite field extensions.
//!
//! The group side works in finitely generated abelian groups
//! `Z^r x Z_{d1} x ... x Z_{dk}` written additively; the linear side works in
//! towers `GF(q) ⊂ GF(q^n)`. Both sides provide a direct decision procedure
//! (bipartite matching, free transversals), a structural characterization in
//! terms of pairs `(S, R)` with `SR = S`, and the Dyson transform that turns a
//! failed Hall/Rado condition into such a pair.

pub mod dyson;
pub mod error;
pub mod ffield;
pub mod group;
pub mod linalg;
pub mod linear;
pub mod linear_matching;
pub mod matching;
pub mod sweep;

pub use error::{Error, Result};
pub use ffield::{BaseField, FieldElement, FieldSpec, FieldTower, MinPoly};
pub use group::{Element, ElementSet, GroupSpec, Order, Subgroup};
pub use linear::{Functional, Subspace};
pub use linear_matching::{LinearCharacterization, LinearInstance, LinearStrategy, LinearViolation, MatchedBasisResult};
pub use matching::{EdgeSet, HallViolator, MatchInstance, MatchingResult, Strategy};

/// Size limits applied by the exhaustive and enumerative routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order accepted by subgroup enumeration.
    pub subgroup_order: u64,
    /// Largest `|A|` for the exhaustive pair scan.
    pub exhaustive_size: usize,
    /// Largest `|A|` for exact matching counts.
    pub count_size: usize,
    /// Largest number of vectors in a subspace scanned element by element.
    pub subspace_vectors: u64,
    /// Largest number of subspace pairs visited by the exhaustive linear scan.
    pub subspace_pairs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subgroup_order: 512,
            exhaustive_size: 14,
            count_size: 20,
            subspace_vectors: 1 << 16,
            subspace_pairs: 5_000_000,
        }
    }
}
