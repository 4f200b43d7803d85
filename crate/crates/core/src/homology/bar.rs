//! Non-normalized bar resolution.
//!
//! `C_k = M ⊗ ℤ[G^k]` with basis `e_c ⊗ [g_1|…|g_k]`, indexed by
//! `tuple · rank + c` where the tuple is read in base `|G|` with `g_1` most
//! significant, and
//!
//! `∂(m ⊗ [g_1|…|g_k]) = g_1^{-1}m ⊗ [g_2|…|g_k]
//!     + Σ_{j=1}^{k−1} (−1)^j m ⊗ […|g_j g_{j+1}|…] + (−1)^k m ⊗ [g_1|…|g_{k−1}]`.

use rayon::prelude::*;

use crate::building::{ChainComplex, HomologyGroup};
use crate::exactla::{IMatrix, Ring, SparseMatrix};

use super::{GModule, HomologyError};

const COLUMN_BLOCK: usize = 4096;

/// `|G|^{top} · rank`, the size of the largest chain group needed for `H_{top−1}`.
pub fn bar_size(m: &GModule, top: usize) -> u128 {
    (m.group().order() as u128).pow(top as u32) * m.rank() as u128
}

/// The bar complex `C_top → … → C_0 → 0`, with `C_{−1} = 0`.
pub fn bar_complex(m: &GModule, top: usize, capacity: u64) -> Result<ChainComplex, HomologyError> {
    let required = bar_size(m, top);
    if required > capacity as u128 {
        return Err(HomologyError::Capacity {
            what: "bar complex".into(),
            required,
            capacity,
        });
    }
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    let inverse_action: Vec<IMatrix> = (0..n).map(|i| m.matrix_of_id(g.inv_id(i))).collect();
    let table = g.multiplication_table();

    let mut dims = vec![0usize];
    let mut boundaries = vec![SparseMatrix::new(0, r)];
    for k in 0..=top {
        dims.push(n.pow(k as u32) * r);
    }
    for k in 1..=top {
        let rows = dims[k];
        let cols = dims[k + 1];
        let tuples = n.pow(k as u32);
        let triplets: Vec<(usize, usize, i64)> = (0..tuples)
            .into_par_iter()
            .chunks(COLUMN_BLOCK.div_ceil(r.max(1)))
            .flat_map_iter(|chunk| {
                let mut out = Vec::new();
                for t in chunk {
                    bar_column(t, k, n, r, &table, &inverse_action, &mut out);
                }
                out
            })
            .collect();
        boundaries.push(SparseMatrix::from_triplets(rows, cols, &triplets));
    }
    Ok(ChainComplex::new(dims, boundaries)?)
}

fn digits(mut t: usize, k: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for i in (0..k).rev() {
        d[i] = t % n;
        t /= n;
    }
    d
}

fn encode(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

fn bar_column(
    t: usize,
    k: usize,
    n: usize,
    r: usize,
    table: &[u32],
    inverse_action: &[IMatrix],
    out: &mut Vec<(usize, usize, i64)>,
) {
    let g = digits(t, k, n);
    let head = encode(&g[1..], n);
    let rho = &inverse_action[g[0]];
    for c in 0..r {
        let col = t * r + c;
        for i in 0..r {
            let x = rho[(i, c)];
            if x != 0 {
                out.push((head * r + i, col, x));
            }
        }
    }
    for j in 1..k {
        let mut h = Vec::with_capacity(k - 1);
        h.extend_from_slice(&g[..j - 1]);
        h.push(table[g[j - 1] * n + g[j]] as usize);
        h.extend_from_slice(&g[j + 1..]);
        let row = encode(&h, n);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for c in 0..r {
            out.push((row * r + c, t * r + c, sign));
        }
    }
    let last = encode(&g[..k - 1], n);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    for c in 0..r {
        out.push((last * r + c, t * r + c, sign));
    }
}

/// `H_i(G; M)` over `ring`. Requires `|G|^{i+1} · rank ≤ capacity`.
pub fn bar_homology(
    m: &GModule,
    i: usize,
    ring: Ring,
    capacity: u64,
) -> Result<HomologyGroup, HomologyError> {
    let c = bar_complex(m, i + 1, capacity)?;
    Ok(c.reduced_homology(i as isize, ring))
}
