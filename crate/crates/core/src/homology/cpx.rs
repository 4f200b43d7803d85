//! Complexes of partial (isotropic) bases: ordered tuples of linearly
//! independent vectors, spanning a totally isotropic subspace for the formed
//! families, with face maps deleting one entry.

use std::collections::HashMap;

use crate::building::{ChainComplex, HomologyGroup, Subspace};
use crate::exactla::{Ring, SparseMatrix};
use crate::groups::{vector_from_index, FpMat, FpVec, GroupKind};

use super::HomologyError;

/// Cells `[v_0, …, v_ℓ]` stored as vertex-id tuples, by dimension.
#[derive(Clone, Debug)]
pub struct SemisimplicialSet {
    kind: GroupKind,
    vertices: Vec<FpVec>,
    vertex_index: HashMap<FpVec, u32>,
    cells: Vec<Vec<Vec<u32>>>,
    cell_index: Vec<HashMap<Vec<u32>, usize>>,
}

/// Connectivity bound: `n − 2` for `GL`/`SL`, `⌊(n − 3)/2⌋` otherwise.
pub fn connectivity_bound(kind: &GroupKind) -> i64 {
    let n = kind.n as i64;
    if kind.family.is_linear() {
        n - 2
    } else {
        (n - 3).div_euclid(2)
    }
}

/// All cells of dimension `≤ dim_cap` (capped at `n − 1`).
pub fn partial_bases_complex(
    kind: GroupKind,
    dim_cap: usize,
    capacity: u64,
) -> Result<SemisimplicialSet, HomologyError> {
    let form = kind.form();
    let m = kind.m();
    let p = kind.p();
    let total = (p as u128).pow(m as u32);
    if total > capacity as u128 {
        return Err(HomologyError::Capacity {
            what: "vectors".into(),
            required: total,
            capacity,
        });
    }
    let vertices: Vec<FpVec> = (1..total as usize)
        .map(|i| vector_from_index(i, m, p))
        .filter(|v| form.is_totally_isotropic(std::slice::from_ref(v)))
        .collect();
    let vertex_index: HashMap<FpVec, u32> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i as u32))
        .collect();
    let top = dim_cap.min(kind.n.saturating_sub(1));
    let mut cells: Vec<Vec<Vec<u32>>> = vec![(0..vertices.len() as u32).map(|v| vec![v]).collect()];
    let mut count = vertices.len() as u64;
    if kind.n == 0 {
        cells[0].clear();
    }
    for _ in 1..=top {
        let prev = cells.last().expect("nonempty");
        let mut next = Vec::new();
        for c in prev {
            let vs: Vec<FpVec> = c.iter().map(|&v| vertices[v as usize].clone()).collect();
            let span = Subspace::span(m, &vs, kind.field);
            for (w, wv) in vertices.iter().enumerate() {
                if span.contains_vector(wv, kind.field) {
                    continue;
                }
                let mut all = vs.clone();
                all.push(wv.clone());
                if !form.is_totally_isotropic(&all) {
                    continue;
                }
                count += 1;
                if count > capacity {
                    return Err(HomologyError::Capacity {
                        what: "partial bases".into(),
                        required: count as u128,
                        capacity,
                    });
                }
                let mut t = c.clone();
                t.push(w as u32);
                next.push(t);
            }
        }
        cells.push(next);
    }
    let cell_index = cells
        .iter()
        .map(|cs| {
            cs.iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (c, i))
                .collect()
        })
        .collect();
    Ok(SemisimplicialSet {
        kind,
        vertices,
        vertex_index,
        cells,
        cell_index,
    })
}

impl SemisimplicialSet {
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn vertices(&self) -> &[FpVec] {
        &self.vertices
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, k: usize) -> &[Vec<u32>] {
        &self.cells[k]
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    /// `d_i` on the `idx`-th `k`-cell.
    pub fn face(&self, k: usize, idx: usize, i: usize) -> usize {
        let mut c = self.cells[k][idx].clone();
        c.remove(i);
        self.cell_index[k - 1][&c]
    }

    /// `d_i d_j = d_{j−1} d_i` for `i < j` on every cell of dimension ≥ 2.
    pub fn check_simplicial_identities(&self) -> bool {
        (2..self.cells.len()).all(|k| {
            (0..self.cells[k].len()).all(|idx| {
                (0..=k).all(|j| {
                    (0..j).all(|i| {
                        let a = self.face(k - 1, self.face(k, idx, j), i);
                        let b = self.face(k - 1, self.face(k, idx, i), j - 1);
                        a == b
                    })
                })
            })
        })
    }

    /// Image of a `k`-cell under `g`.
    pub fn act(&self, g: &FpMat, k: usize, idx: usize) -> usize {
        let f = self.kind.field;
        let c: Vec<u32> = self.cells[k][idx]
            .iter()
            .map(|&v| self.vertex_index[&g.apply(&self.vertices[v as usize], f)])
            .collect();
        self.cell_index[k][&c]
    }

    /// Number of orbits of `⟨gens⟩` on the `k`-cells.
    pub fn orbit_count(&self, gens: &[FpMat], k: usize) -> usize {
        let n = self.cell_count(k);
        let mut uf = UnionFind::new(n);
        for g in gens {
            for idx in 0..n {
                uf.union(idx, self.act(g, k, idx));
            }
        }
        uf.components()
    }

    /// Whether the 1-skeleton is connected (and the vertex set nonempty).
    pub fn is_connected(&self) -> bool {
        let n = self.cell_count(0);
        if n == 0 {
            return false;
        }
        let mut uf = UnionFind::new(n);
        if let Some(edges) = self.cells.get(1) {
            for e in edges {
                uf.union(e[0] as usize, e[1] as usize);
            }
        }
        uf.components() == 1
    }

    /// Augmented chain complex with `∂ = Σ (−1)^i d_i` and `C_{−1} = ℤ`.
    pub fn chain_complex(&self) -> Result<ChainComplex, HomologyError> {
        let mut dims = vec![1];
        dims.extend(self.cells.iter().map(Vec::len));
        let mut boundaries = Vec::with_capacity(self.cells.len());
        let aug: Vec<(usize, usize, i64)> = (0..self.cell_count(0)).map(|j| (0, j, 1)).collect();
        boundaries.push(SparseMatrix::from_triplets(1, self.cell_count(0), &aug));
        for k in 1..self.cells.len() {
            let mut t = Vec::with_capacity(self.cells[k].len() * (k + 1));
            for idx in 0..self.cells[k].len() {
                for i in 0..=k {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    t.push((self.face(k, idx, i), idx, sign));
                }
            }
            boundaries.push(SparseMatrix::from_triplets(
                self.cells[k - 1].len(),
                self.cells[k].len(),
                &t,
            ));
        }
        Ok(ChainComplex::new(dims, boundaries)?)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}

/// Orbit count of `𝔾_n` on the `ℓ`-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub kind: GroupKind,
    pub l: usize,
    pub cells: usize,
    pub orbits: usize,
}

pub fn orbit_transitivity(
    kind: GroupKind,
    l: usize,
    capacity: u64,
) -> Result<OrbitReport, HomologyError> {
    let cpx = partial_bases_complex(kind, l, capacity)?;
    if cpx.top_dim() < l {
        return Err(HomologyError::Malformed(format!("{kind} has no {l}-cells")));
    }
    Ok(OrbitReport {
        kind,
        l,
        cells: cpx.cell_count(l),
        orbits: cpx.orbit_count(&kind.generators(), l),
    })
}

/// `H̃_j` of the complex for `j ≤ f(n)`, and connectedness when `f(n) ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub kind: GroupKind,
    pub bound: i64,
    pub cells: Vec<usize>,
    pub homology: Vec<HomologyGroup>,
    pub connected: Option<bool>,
}

impl ConnectivityReport {
    pub fn holds(&self) -> bool {
        self.homology.iter().all(HomologyGroup::is_zero) && self.connected != Some(false)
    }
}

pub fn connectivity_homology_check(
    kind: GroupKind,
    capacity: u64,
) -> Result<ConnectivityReport, HomologyError> {
    let f = connectivity_bound(&kind);
    if f < 0 {
        return Ok(ConnectivityReport {
            kind,
            bound: f,
            cells: Vec::new(),
            homology: Vec::new(),
            connected: None,
        });
    }
    let cpx = partial_bases_complex(kind, f as usize + 1, capacity)?;
    let cc = cpx.chain_complex()?;
    let homology = (0..=f)
        .map(|j| cc.reduced_homology(j as isize, Ring::Integers))
        .collect();
    Ok(ConnectivityReport {
        kind,
        bound: f,
        cells: (0..=cpx.top_dim()).map(|k| cpx.cell_count(k)).collect(),
        homology,
        connected: Some(cpx.is_connected()),
    })
}
