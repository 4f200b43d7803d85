//! Row reduction over fields, and ring-tagged entry points for integer input.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::matrix::Matrix;
use super::scalar::{FieldScalar, Ring};
use super::{snf, IMatrix, LinalgError};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T> Rref<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref<T: FieldScalar>(m: &Matrix<T>) -> Rref<T> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, piv);
        let inv = a[(r, c)].inverse().expect("nonzero pivot");
        for j in c..cols {
            let t = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = t;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let t = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { reduced: a, pivots }
}

pub fn rank<T: FieldScalar>(m: &Matrix<T>) -> usize {
    rref(m).rank()
}

/// Rows form a basis of `{v : M v = 0}`.
pub fn kernel_basis<T: FieldScalar>(m: &Matrix<T>) -> Matrix<T> {
    let r = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !r.pivots.contains(c)).collect();
    let mut out = Matrix::zeros(free.len(), cols);
    for (k, &f) in free.iter().enumerate() {
        out[(k, f)] = T::one();
        for (row, &pc) in r.pivots.iter().enumerate() {
            out[(k, pc)] = -r.reduced[(row, f)].clone();
        }
    }
    out
}

/// Solves `A x = b`. `Ok(None)` means `b` is not in the column space.
pub fn solve<T: FieldScalar>(a: &Matrix<T>, b: &[T]) -> Result<Option<Vec<T>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let aug = a.hstack(&Matrix::from_columns(a.rows(), &[b.to_vec()]));
    let r = rref(&aug);
    if r.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![T::zero(); a.cols()];
    for (row, &pc) in r.pivots.iter().enumerate() {
        x[pc] = r.reduced[(row, a.cols())].clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix over a field, if it exists.
pub fn inverse<T: FieldScalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    assert!(m.is_square());
    let n = m.rows();
    let r = rref(&m.hstack(&Matrix::identity(n)));
    if r.pivots.iter().take(n).copied().ne(0..n) {
        return None;
    }
    Some(r.reduced.select_cols(&(n..2 * n).collect::<Vec<_>>()))
}

pub fn to_rational(m: &IMatrix) -> Matrix<BigRational> {
    m.map(|&x| BigRational::from_integer(BigInt::from(x)))
}

/// Rank of an integer matrix after base change to `ring`.
pub fn rank_over(ring: Ring, m: &IMatrix) -> usize {
    match ring {
        Ring::Integers | Ring::Rationals => snf::rank(m),
        Ring::Prime(k) => {
            crate::dispatch_prime!(k.p(), F => rank(&m.map(|&x| F::new(x))))
        }
    }
}

/// Field-only rank: refuses the integers, mirroring the typed API where
/// row reduction needs a [`FieldScalar`].
pub fn field_rank(ring: Ring, m: &IMatrix) -> Result<usize, LinalgError> {
    if !ring.is_field() {
        return Err(LinalgError::UnsupportedRing(ring));
    }
    Ok(rank_over(ring, m))
}

/// Dimension of the null space of an integer matrix reduced into a field.
pub fn kernel_dim_over(ring: Ring, m: &IMatrix) -> Result<usize, LinalgError> {
    Ok(m.cols() - field_rank(ring, m)?)
}

/// Reduced row echelon form of an integer matrix over a field ring. Prime
/// field entries are lifted to `0..p`.
pub fn rref_over(ring: Ring, m: &IMatrix) -> Result<Rref<BigRational>, LinalgError> {
    match ring {
        Ring::Rationals => Ok(rref(&to_rational(m))),
        Ring::Prime(k) => Ok(crate::dispatch_prime!(k.p(), F => {
            let r = rref(&m.map(|&x| F::new(x)));
            Rref {
                reduced: r.reduced.map(|x| BigRational::from_integer(BigInt::from(x.value()))),
                pivots: r.pivots,
            }
        })),
        Ring::Integers => Err(LinalgError::UnsupportedRing(ring)),
    }
}
