//! Steinberg modules of the finite classical groups over prime fields.
//!
//! The crate builds the groups `GL_n`, `SL_n`, `Sp_2n`, `SO_{n,n}` and
//! `SO_{n,n+1}` over GF(p), their Tits buildings and Steinberg modules with
//! exact integer coefficients, and the structural maps between them: the
//! Reeder product and projection, stabilization, and the maps `π`, `ζ_m`, `ζ`
//! on `St_{GL_3} → St_{GL_2}`. The [`homology`] module computes coinvariants,
//! bar-resolution homology, complexes of partial bases and the first page of
//! the equivariant spectral sequence.

pub mod apartments;
pub mod building;
pub mod exactla;
pub mod groups;
pub mod homology;
pub mod reeder;

pub use exactla::{Gf, IMatrix, Matrix, PrimeField, QMatrix, Ring, ZMatrix};
pub use groups::{ClassicalGroup, Family, GroupKind};

pub type Rational = num_rational::BigRational;
pub type F2 = Gf<2>;
pub type F3 = Gf<3>;
pub type F5 = Gf<5>;

/// Default bound on enumerated objects (group orders, bar-complex sizes).
pub const DEFAULT_CAPACITY: u64 = 1_000_000;
