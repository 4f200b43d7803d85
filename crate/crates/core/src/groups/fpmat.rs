//! Compact square matrices over a small prime field.

use std::fmt;

use crate::exactla::{IMatrix, PrimeField};

/// Vector over GF(p) with entries in `0..p`.
pub type FpVec = Vec<u8>;

/// Square matrix over GF(p), row-major, entries in `0..p`. Column `j` is the
/// image of the `j`-th basis vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMat {
    dim: usize,
    entries: Vec<u8>,
}

impl FpMat {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        FpMat { dim, entries }
    }

    /// Reduces each entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix must be square");
            entries.extend(r.iter().map(|&x| field.reduce(x) as u8));
        }
        FpMat { dim, entries }
    }

    /// Matrix with the given columns (already reduced).
    pub fn from_columns(cols: &[FpVec]) -> Self {
        let dim = cols.len();
        let mut m = FpMat {
            dim,
            entries: vec![0; dim * dim],
        };
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> FpVec {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == u8::from(i == j)))
    }

    pub fn mul(&self, other: &FpMat, k: PrimeField) -> FpMat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let p = k.p();
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for t in 0..n {
                    acc += self.get(i, t) as u32 * other.get(t, j) as u32;
                }
                entries[i * n + j] = (acc % p) as u8;
            }
        }
        FpMat { dim: n, entries }
    }

    pub fn apply(&self, v: &[u8], k: PrimeField) -> FpVec {
        assert_eq!(v.len(), self.dim);
        let p = k.p();
        (0..self.dim)
            .map(|i| {
                let acc: u32 = (0..self.dim)
                    .map(|t| self.get(i, t) as u32 * v[t] as u32)
                    .sum();
                (acc % p) as u8
            })
            .collect()
    }

    pub fn transpose(&self) -> FpMat {
        let mut m = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(j, i));
            }
        }
        m
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, k: PrimeField) -> Option<FpMat> {
        let n = self.dim;
        let mut a: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r: Vec<u32> = (0..n).map(|j| self.get(i, j) as u32).collect();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).find(|&i| a[i][c] != 0)?;
            a.swap(c, piv);
            let inv = k.inv(a[c][c]).expect("nonzero pivot");
            for x in a[c].iter_mut() {
                *x = k.mul(*x, inv);
            }
            for i in 0..n {
                if i != c && a[i][c] != 0 {
                    let f = a[i][c];
                    for j in 0..2 * n {
                        let t = k.mul(f, a[c][j]);
                        a[i][j] = k.sub(a[i][j], t);
                    }
                }
            }
        }
        let mut out = FpMat::identity(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a[i][n + j] as u8);
            }
        }
        Some(out)
    }

    pub fn det(&self, k: PrimeField) -> u32 {
        let n = self.dim;
        let mut a: Vec<Vec<u32>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) as u32).collect())
            .collect();
        let mut det = 1 % k.p();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
                return 0;
            };
            if piv != c {
                a.swap(c, piv);
                det = k.neg(det);
            }
            det = k.mul(det, a[c][c]);
            let inv = k.inv(a[c][c]).expect("nonzero pivot");
            for i in c + 1..n {
                if a[i][c] != 0 {
                    let f = k.mul(a[i][c], inv);
                    for j in c..n {
                        let t = k.mul(f, a[c][j]);
                        a[i][j] = k.sub(a[i][j], t);
                    }
                }
            }
        }
        det
    }

    /// Copies `block` into rows and columns `positions`, leaving the rest.
    pub fn embed(&mut self, positions: &[usize], block: &FpMat) {
        assert_eq!(positions.len(), block.dim);
        for (bi, &i) in positions.iter().enumerate() {
            for (bj, &j) in positions.iter().enumerate() {
                self.set(i, j, block.get(bi, bj));
            }
        }
    }

    /// Principal submatrix on `positions`.
    pub fn restrict(&self, positions: &[usize]) -> FpMat {
        let d = positions.len();
        let mut m = FpMat::identity(d);
        for (bi, &i) in positions.iter().enumerate() {
            for (bj, &j) in positions.iter().enumerate() {
                m.set(bi, bj, self.get(i, j));
            }
        }
        m
    }

    /// Lift to integers with representatives in `0..p`.
    pub fn to_imatrix(&self) -> IMatrix {
        IMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as i64)
    }
}

impl fmt::Debug for FpMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Index of a vector read as a base-`p` numeral, first coordinate least
/// significant.
pub fn vector_index(v: &[u8], p: u32) -> usize {
    v.iter()
        .rev()
        .fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn vector_from_index(mut idx: usize, m: usize, p: u32) -> FpVec {
    let mut v = vec![0u8; m];
    for x in v.iter_mut() {
        *x = (idx % p as usize) as u8;
        idx /= p as usize;
    }
    v
}
