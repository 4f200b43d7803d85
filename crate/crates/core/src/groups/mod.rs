//! The five classical families over GF(p), their forms, distinguished
//! subgroups and special elements.
//!
//! [`GroupKind`] is a cheap descriptor (membership, generators, Levi
//! embeddings, `κ_m`) and never enumerates. [`build_group`] produces a
//! [`ClassicalGroup`] holding every element.
//!
//! Orthogonal groups in characteristic 2 are taken naively: the stabilizer
//! of the quadratic form, with no Dickson invariant quotient.

mod enumerate;
mod form;
mod fpmat;
mod kind;

use thiserror::Error;

pub use enumerate::{build_group, exhaustive_order, ClassicalGroup, MatrixGroup, SubgroupFilter};
pub use form::{FormKind, FormSpec};
pub use fpmat::{vector_from_index, vector_index, FpMat, FpVec};
pub use kind::{hat_kappa, Family, GroupKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("estimated order {estimated} exceeds capacity {capacity}")]
    Capacity { estimated: u128, capacity: u64 },
    #[error("level {level} out of range 1..={n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("rank {n} too small, need at least {needed}")]
    RankTooSmall { n: usize, needed: usize },
    #[error("generators of {group} produced {found} elements, expected {expected}")]
    IncompleteGenerators {
        group: String,
        expected: u128,
        found: usize,
    },
    #[error("unsupported prime {0}")]
    InvalidPrime(u32),
    #[error("unknown family '{0}' (use GL, SL, Sp, SOnn or SOnn1)")]
    UnknownFamily(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
}

impl GroupError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, GroupError::Capacity { .. })
    }
}
