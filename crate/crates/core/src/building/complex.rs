//! Flag complexes of (isotropic) subspaces and augmented chain complexes.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactla::{Ring, SparseMatrix};
use crate::groups::{FpMat, GroupKind};

use super::subspace::{enumerate_subspaces, gaussian_binomial, Subspace};
use super::BuildingError;

/// Reduced homology in one degree: free rank plus torsion invariant
/// factors (empty over fields).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// An augmented chain complex `C_top → … → C_0 → C_{−1} = R`.
///
/// `dims[k + 1]` is the rank of `C_k`; `boundaries[k]` is `∂_k : C_k → C_{k−1}`
/// for `k = 0..=top`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Validates shapes and `∂∘∂ = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, BuildingError> {
        if dims.is_empty() || boundaries.len() + 1 != dims.len() {
            return Err(BuildingError::Malformed("degree range mismatch".into()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(BuildingError::Malformed(format!(
                    "∂_{k} has the wrong shape"
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].composes_to_zero(&boundaries[k]) {
                return Err(BuildingError::Malformed(format!(
                    "∂_{} ∘ ∂_{} ≠ 0",
                    k - 1,
                    k
                )));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    /// Highest degree with chains.
    pub fn top_degree(&self) -> isize {
        self.dims.len() as isize - 2
    }

    pub fn dim(&self, k: isize) -> usize {
        if k < -1 || k > self.top_degree() {
            0
        } else {
            self.dims[(k + 1) as usize]
        }
    }

    /// `∂_k`, for `0 ≤ k ≤ top`.
    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        &self.boundaries[k]
    }

    fn boundary_opt(&self, k: isize) -> Option<&SparseMatrix> {
        if k < 0 {
            None
        } else {
            self.boundaries.get(k as usize)
        }
    }

    /// Reduced homology `H̃_k` with coefficients in `ring`.
    pub fn reduced_homology(&self, k: isize, ring: Ring) -> HomologyGroup {
        let dim = self.dim(k);
        let out_rank = self.boundary_opt(k).map_or(0, |d| rank_in(d, ring));
        match ring {
            Ring::Integers => {
                let factors = self
                    .boundary_opt(k + 1)
                    .map(SparseMatrix::invariant_factors)
                    .unwrap_or_default();
                HomologyGroup {
                    rank: dim - out_rank - factors.len(),
                    torsion: factors.into_iter().filter(|f| !f.is_one()).collect(),
                }
            }
            _ => {
                let in_rank = self.boundary_opt(k + 1).map_or(0, |d| rank_in(d, ring));
                HomologyGroup {
                    rank: dim - out_rank - in_rank,
                    torsion: Vec::new(),
                }
            }
        }
    }
}

fn rank_in(d: &SparseMatrix, ring: Ring) -> usize {
    match ring {
        Ring::Integers | Ring::Rationals => d.rank(),
        Ring::Prime(k) => d.rank_mod(k.p()),
    }
}

/// Isotropic subspaces of dimension `d` for `kind` (all subspaces for the
/// linear families).
pub fn enumerate_isotropic_subspaces(
    kind: &GroupKind,
    d: usize,
    capacity: u64,
) -> Result<Vec<Subspace>, BuildingError> {
    let m = kind.m();
    let count = gaussian_binomial(m, d, kind.p() as u64);
    if count > capacity as u128 {
        return Err(BuildingError::Capacity {
            what: format!("{d}-subspaces of F{}^{m}", kind.p()),
            size: count,
            capacity,
        });
    }
    let form = kind.form();
    Ok(enumerate_subspaces(m, d, kind.field)
        .into_iter()
        .filter(|s| form.is_totally_isotropic(&s.basis()))
        .collect())
}

/// The Tits building of `kind` as the flag complex of proper nonzero
/// (isotropic) subspaces.
#[derive(Clone, Debug)]
pub struct FlagComplex {
    kind: GroupKind,
    vertices: Vec<Subspace>,
    vertex_index: HashMap<Subspace, u32>,
    /// `simplices[k + 1]` lists the `k`-simplices as increasing vertex ids;
    /// degree −1 holds the single empty simplex.
    simplices: Vec<Vec<Vec<u32>>>,
    simplex_index: Vec<HashMap<Vec<u32>, usize>>,
}

impl FlagComplex {
    pub fn new(kind: GroupKind, capacity: u64) -> Result<Self, BuildingError> {
        let dims: Vec<usize> = if kind.family.has_form() {
            (1..=kind.n).collect()
        } else {
            (1..kind.n).collect()
        };
        let mut vertices = Vec::new();
        for &d in &dims {
            vertices.extend(enumerate_isotropic_subspaces(&kind, d, capacity)?);
        }
        vertices.sort();
        let vertex_index: HashMap<Subspace, u32> = vertices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();

        let k = kind.field;
        let mut up: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for (i, u) in vertices.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate().skip(i + 1) {
                if w.dim() > u.dim() && u.is_subspace_of(w, k) {
                    up[i].push(j as u32);
                }
            }
        }

        let mut simplices: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
        simplices.resize(dims.len() + 1, Vec::new());
        let mut count: u64 = 0;
        let mut stack: Vec<Vec<u32>> = (0..vertices.len() as u32).rev().map(|v| vec![v]).collect();
        while let Some(chain) = stack.pop() {
            count += 1;
            if count > capacity {
                return Err(BuildingError::Capacity {
                    what: format!("simplices of the building of {kind}"),
                    size: count as u128,
                    capacity,
                });
            }
            let last = *chain.last().unwrap() as usize;
            for &w in up[last].iter().rev() {
                let mut c = chain.clone();
                c.push(w);
                stack.push(c);
            }
            simplices[chain.len()].push(chain);
        }
        for s in simplices.iter_mut() {
            s.sort();
        }
        let simplex_index = simplices
            .iter()
            .map(|level| {
                level
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect()
            })
            .collect();
        Ok(FlagComplex {
            kind,
            vertices,
            vertex_index,
            simplices,
            simplex_index,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn vertex_id(&self, s: &Subspace) -> Option<u32> {
        self.vertex_index.get(s).copied()
    }

    /// Top simplex degree, −1 for the empty complex.
    pub fn top_degree(&self) -> isize {
        self.simplices.len() as isize - 2
    }

    pub fn simplices(&self, k: isize) -> &[Vec<u32>] {
        &self.simplices[(k + 1) as usize]
    }

    pub fn simplex_id(&self, k: isize, s: &[u32]) -> Option<usize> {
        self.simplex_index[(k + 1) as usize].get(s).copied()
    }

    /// Top-dimensional simplices.
    pub fn chambers(&self) -> &[Vec<u32>] {
        self.simplices(self.top_degree())
    }

    pub fn chamber_id(&self, s: &[u32]) -> Option<usize> {
        self.simplex_id(self.top_degree(), s)
    }

    /// Chamber containing the flag of the given subspaces, if every
    /// subspace is a vertex and the flag is maximal.
    pub fn chamber_of_flag(&self, flag: &[Subspace]) -> Option<usize> {
        let ids: Option<Vec<u32>> = flag.iter().map(|s| self.vertex_id(s)).collect();
        self.chamber_id(&ids?)
    }

    /// Image of vertex `v` under `g`.
    pub fn vertex_image(&self, g: &FpMat, v: u32) -> u32 {
        let img = self.vertices[v as usize].image(g, self.kind.field);
        self.vertex_id(&img)
            .expect("group elements preserve the building")
    }

    /// Image of a chamber under `g`. Dimensions are preserved, so the image
    /// flag is again increasing and no orientation sign arises.
    pub fn chamber_image(&self, g: &FpMat, c: usize) -> usize {
        let img: Vec<u32> = self.chambers()[c]
            .iter()
            .map(|&v| self.vertex_image(g, v))
            .collect();
        self.chamber_id(&img)
            .expect("images of chambers are chambers")
    }

    /// The augmented chain complex with integer boundary matrices.
    pub fn chain_complex(&self) -> ChainComplex {
        let dims: Vec<usize> = self.simplices.iter().map(Vec::len).collect();
        let mut boundaries = Vec::new();
        for k in 0..=self.top_degree() {
            let mut trip = Vec::new();
            for (j, s) in self.simplices(k).iter().enumerate() {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = self.simplex_id(k - 1, &face).expect("faces are present");
                    trip.push((row, j, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            boundaries.push(SparseMatrix::from_triplets(
                dims[k as usize],
                dims[k as usize + 1],
                &trip,
            ));
        }
        ChainComplex::new(dims, boundaries).expect("flag complexes are well formed")
    }

    /// Plain-text export: a header per degree, then one line per simplex
    /// listing its vertex ids.
    pub fn export_simplices(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} vertices", self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let rows: Vec<String> = v
                .basis()
                .iter()
                .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(""))
                .collect();
            let _ = writeln!(out, "# v{i} dim={} rref={}", v.dim(), rows.join(","));
        }
        for k in 0..=self.top_degree() {
            let _ = writeln!(out, "degree {k} {}", self.simplices(k).len());
            for s in self.simplices(k) {
                let ids: Vec<String> = s.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{}", ids.join(" "));
            }
        }
        out
    }
}

/// Coordinate triplets `row col value`, one per line, after a shape header.
pub fn export_triplets(m: &SparseMatrix) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.nnz());
    for (i, j, x) in m.triplets() {
        let _ = writeln!(out, "{i} {j} {x}");
    }
    out
}
