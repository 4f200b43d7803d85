//! Subspaces of GF(p)^m in canonical reduced row echelon form.

use crate::exactla::PrimeField;
use crate::groups::{FpMat, FpVec};

/// A subspace stored by its RREF basis. The derived order compares
/// dimension first, then the RREF bytes; this is the global vertex order
/// that orients every simplex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    dim: usize,
    rows: Vec<u8>,
    m: usize,
}

impl Subspace {
    /// Span of the given vectors.
    pub fn span(m: usize, vectors: &[FpVec], k: PrimeField) -> Subspace {
        let mut rows: Vec<Vec<u32>> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), m);
                v.iter().map(|&x| x as u32).collect()
            })
            .collect();
        let mut r = 0;
        for c in 0..m {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = k.inv(rows[r][c]).unwrap();
            for x in rows[r].iter_mut() {
                *x = k.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..m {
                        let t = k.mul(f, rows[r][j]);
                        rows[i][j] = k.sub(rows[i][j], t);
                    }
                }
            }
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        Subspace {
            dim: r,
            rows: rows.into_iter().flatten().map(|x| x as u8).collect(),
            m,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.m
    }

    /// RREF basis rows.
    pub fn basis(&self) -> Vec<FpVec> {
        self.rows
            .chunks(self.m.max(1))
            .take(self.dim)
            .map(<[u8]>::to_vec)
            .collect()
    }

    pub fn rref_bytes(&self) -> &[u8] {
        &self.rows
    }

    pub fn contains_vector(&self, v: &[u8], k: PrimeField) -> bool {
        let mut w: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        for row in self.rows.chunks(self.m) {
            let pc = row.iter().position(|&x| x != 0).expect("nonzero RREF row");
            let f = w[pc];
            if f != 0 {
                for j in 0..self.m {
                    w[j] = k.sub(w[j], k.mul(f, row[j] as u32));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace, k: PrimeField) -> bool {
        self.dim <= other.dim && self.basis().iter().all(|v| other.contains_vector(v, k))
    }

    pub fn image(&self, g: &FpMat, k: PrimeField) -> Subspace {
        let imgs: Vec<FpVec> = self.basis().iter().map(|v| g.apply(v, k)).collect();
        Subspace::span(self.m, &imgs, k)
    }
}

/// Number of `d`-dimensional subspaces of GF(q)^m.
pub fn gaussian_binomial(m: usize, d: usize, q: u64) -> u128 {
    if d > m {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= q.pow((m - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `d`-dimensional subspaces of GF(p)^m, in increasing order.
pub fn enumerate_subspaces(m: usize, d: usize, k: PrimeField) -> Vec<Subspace> {
    let p = k.p() as usize;
    let mut out = Vec::new();
    if d > m {
        return out;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // Free positions: (row i, column j) with j > pivot_i and j not a pivot.
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..m)
                    .filter(move |j| !pv.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let total = p.pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![0u8; d * m];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i * m + pc] = 1;
            }
            let mut x = idx;
            for &(i, j) in &free {
                rows[i * m + j] = (x % p) as u8;
                x /= p;
            }
            out.push(Subspace { dim: d, rows, m });
        }
        // Next combination of pivot columns.
        let mut i = d;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if pivots[i] < m - d + i {
                pivots[i] += 1;
                for t in i + 1..d {
                    pivots[t] = pivots[t - 1] + 1;
                }
                break;
            }
        }
    }
}
