//! Tits buildings as flag complexes of (isotropic) subspaces, their
//! augmented chain complexes, and the Steinberg module in top degree.
//!
//! Simplices are oriented by the global vertex order of [`Subspace`]
//! (dimension, then RREF bytes). Since every simplex is a chain of
//! distinct dimensions, group elements permute simplices without signs.

mod complex;
mod steinberg;
mod subspace;

use thiserror::Error;

use crate::groups::{GroupError, GroupKind};

pub use complex::{
    enumerate_isotropic_subspaces, export_triplets, ChainComplex, FlagComplex, HomologyGroup,
};
pub use steinberg::{BasisSource, CoordinateSolver, SteinbergModule};
pub use subspace::{enumerate_subspaces, gaussian_binomial, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildingError {
    #[error("{what}: size {size} exceeds capacity {capacity}")]
    Capacity {
        what: String,
        size: u128,
        capacity: u64,
    },
    #[error("malformed chain complex: {0}")]
    Malformed(String),
    #[error("Steinberg basis extraction failed: {0}")]
    BasisExtraction(String),
    #[error("chain is not in the span of the basis")]
    NotInSpan,
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl BuildingError {
    pub fn is_capacity(&self) -> bool {
        match self {
            BuildingError::Capacity { .. } => true,
            BuildingError::Group(e) => e.is_capacity(),
            _ => false,
        }
    }
}

/// The Tits building of `kind`. `SL_n` and `GL_n` give the same complex.
pub fn tits_complex(kind: GroupKind, capacity: u64) -> Result<FlagComplex, BuildingError> {
    FlagComplex::new(kind, capacity)
}
