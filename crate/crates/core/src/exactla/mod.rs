//! Exact linear algebra over prime fields, the rationals and the integers.

mod field;
mod matrix;
mod scalar;
pub mod snf;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use field::{
    field_rank, inverse, kernel_basis, kernel_dim_over, rank, rank_over, rref, rref_over, solve,
    to_rational, Rref,
};
pub use matrix::Matrix;
pub use scalar::{FieldScalar, Gf, IntegerScalar, PrimeField, Ring, Scalar, SUPPORTED_PRIMES};
pub use snf::{
    determinant, integer_kernel, invariant_factors, smith_normal_form, solve_integer,
    unimodular_inverse, Smith, SparseMatrix,
};

/// Small-entry integer matrices: module actions, chains, product maps.
pub type IMatrix = Matrix<i64>;
/// Arbitrary-precision integer matrices.
pub type ZMatrix = Matrix<BigInt>;
/// Rational matrices.
pub type QMatrix = Matrix<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("operation requires a field, got {0}")]
    UnsupportedRing(Ring),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not a supported prime (2 <= p <= 97)")]
    InvalidPrime(u32),
    #[error("unknown ring '{0}' (use Z, Q or Fp such as F3)")]
    UnknownRing(String),
}
