//! Group homology with twisted coefficients at small scale: coinvariants,
//! bar-resolution homology, induction, the Shapiro isomorphism between
//! Levi and stabilizer sides, complexes of partial bases, and the first page
//! of the equivariant spectral sequence.

mod bar;
mod cpx;
mod e1;
mod gmodule;
mod shapiro;

use thiserror::Error;

use crate::building::BuildingError;
use crate::groups::GroupError;
use crate::reeder::ReederError;

pub use bar::{bar_complex, bar_homology, bar_size};
pub use cpx::{
    connectivity_bound, connectivity_homology_check, orbit_transitivity, partial_bases_complex,
    ConnectivityReport, OrbitReport, SemisimplicialSet,
};
pub use e1::{e1_page, factorization_check, E1Entry, E1Page, FactorTerm, FactorizationReport};
pub use gmodule::{quotient, relation_matrix, Action, GModule};
pub use shapiro::{shapiro_check, ShapiroMaps, ShapiroReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("{what} needs {required} entries, capacity is {capacity}")]
    Capacity {
        what: String,
        required: u128,
        capacity: u64,
    },
    #[error("action is not a homomorphism at {0}")]
    NotAHomomorphism(String),
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Reeder(#[from] ReederError),
}

impl HomologyError {
    /// Whether the failure is a size limit rather than a wrong answer.
    pub fn is_capacity(&self) -> bool {
        match self {
            HomologyError::Capacity { .. } => true,
            HomologyError::Building(e) => e.is_capacity(),
            HomologyError::Group(e) => e.is_capacity(),
            HomologyError::Reeder(e) => e.is_capacity(),
            _ => false,
        }
    }
}
