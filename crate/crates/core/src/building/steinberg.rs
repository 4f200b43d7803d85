//! The Steinberg module `St = H̃_top` of a Tits building, with an explicit
//! integral basis of top-degree cycles and the induced group action.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::apartments;
use crate::exactla::{self, IMatrix, QMatrix, Ring, SparseMatrix};
use crate::groups::{FpMat, GroupKind};

use super::complex::{ChainComplex, FlagComplex};
use super::BuildingError;

/// Where the basis came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisSource {
    /// Apartment classes of `U_B`-translates of the standard frame.
    Apartments,
    /// Integer kernel of the top boundary (fallback).
    Kernel,
}

/// Recovers basis coordinates of a chain lying in the span of the basis.
#[derive(Clone, Debug)]
pub enum CoordinateSolver {
    /// Row `rows[j]` of the basis matrix is `signs[j]·e_j`, so coordinate
    /// `j` is read off a single chamber.
    SignedRows { rows: Vec<usize>, signs: Vec<i64> },
    /// Rows `rows` form an invertible square block with inverse `inverse`.
    Rational { rows: Vec<usize>, inverse: QMatrix },
}

impl CoordinateSolver {
    pub fn new(basis: &IMatrix) -> CoordinateSolver {
        let r = basis.cols();
        let mut rows = vec![usize::MAX; r];
        let mut signs = vec![0; r];
        for i in 0..basis.rows() {
            let row = basis.row(i);
            let mut nz = row.iter().enumerate().filter(|(_, &x)| x != 0);
            if let (Some((j, &x)), None) = (nz.next(), nz.next()) {
                if (x == 1 || x == -1) && rows[j] == usize::MAX {
                    rows[j] = i;
                    signs[j] = x;
                }
            }
        }
        if rows.iter().all(|&i| i != usize::MAX) {
            return CoordinateSolver::SignedRows { rows, signs };
        }
        // Independent rows from the pivots of the transposed basis.
        let q = exactla::to_rational(&basis.transpose());
        let red = exactla::rref(&q);
        let rows = red.pivots.clone();
        let block = exactla::to_rational(&basis.select_rows(&rows));
        let inverse = exactla::inverse(&block).expect("pivot rows are independent");
        CoordinateSolver::Rational { rows, inverse }
    }

    /// Coordinates of `chain`, assuming it lies in the rational span.
    pub fn coords(&self, chain: &[i64]) -> Vec<BigRational> {
        match self {
            CoordinateSolver::SignedRows { rows, signs } => rows
                .iter()
                .zip(signs)
                .map(|(&i, &s)| BigRational::from_integer(BigInt::from(s * chain[i])))
                .collect(),
            CoordinateSolver::Rational { rows, inverse } => {
                let sel: Vec<BigRational> = rows
                    .iter()
                    .map(|&i| BigRational::from_integer(chain[i].into()))
                    .collect();
                inverse.mul_vec(&sel)
            }
        }
    }
}

/// `St_𝔾(GF(p); ℤ)` with an explicit basis. Base change to `ℚ` or `GF(ℓ)`
/// is by reduction of coefficients; the module is free.
#[derive(Clone, Debug)]
pub struct SteinbergModule {
    kind: GroupKind,
    complex: FlagComplex,
    chain_complex: ChainComplex,
    basis: IMatrix,
    labels: Vec<String>,
    unipotents: Vec<FpMat>,
    source: BasisSource,
    solver: CoordinateSolver,
}

impl SteinbergModule {
    pub fn new(kind: GroupKind, capacity: u64) -> Result<Self, BuildingError> {
        let complex = FlagComplex::new(kind, capacity)?;
        let chain_complex = complex.chain_complex();
        let top = complex.top_degree();
        let rank = chain_complex.reduced_homology(top, Ring::Integers).rank;
        let chambers = complex.chambers().len();

        let unipotents = apartments::borel_unipotents(&kind);
        let frame = apartments::standard_frame(&kind);
        let mut columns = Vec::with_capacity(unipotents.len());
        for u in &unipotents {
            columns.push(apartments::frame_chain(
                &complex,
                &frame.translate(u, kind.field),
            )?);
        }
        let candidate = IMatrix::from_columns(chambers, &columns);
        let top_boundary = (top >= 0).then(|| chain_complex.boundary(top as usize));
        let is_cycle = top_boundary.map_or(true, |d| d.mul_dense(&candidate).is_zero());
        let (basis, labels, unipotents, source) =
            if is_cycle && columns.len() == rank && exactla::snf::is_unimodular_rank(&candidate) {
                let labels = unipotents
                    .iter()
                    .map(|u| unipotent_label(&kind, u))
                    .collect();
                (candidate, labels, unipotents, BasisSource::Apartments)
            } else {
                let d = top_boundary.expect("apartment basis cannot fail without a boundary");
                let basis = exactla::integer_kernel(&d.to_dense());
                if basis.cols() != rank {
                    return Err(BuildingError::BasisExtraction(format!(
                        "kernel has {} columns, homology rank is {rank}",
                        basis.cols()
                    )));
                }
                let labels = (0..rank).map(|j| format!("z{j}")).collect();
                (basis, labels, Vec::new(), BasisSource::Kernel)
            };
        let solver = CoordinateSolver::new(&basis);
        Ok(SteinbergModule {
            kind,
            complex,
            chain_complex,
            basis,
            labels,
            unipotents,
            source,
            solver,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn complex(&self) -> &FlagComplex {
        &self.complex
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.chain_complex
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Rank over `ring`; equal for every ring since the module is free.
    pub fn rank_over(&self, ring: Ring) -> usize {
        exactla::rank_over(ring, &self.basis)
    }

    /// Top reduced homology over `ring`, computed directly from the complex.
    pub fn homology_rank_over(&self, ring: Ring) -> usize {
        self.chain_complex
            .reduced_homology(self.complex.top_degree(), ring)
            .rank
    }

    /// Columns are basis cycles, rows are chambers.
    pub fn basis(&self) -> &IMatrix {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    pub fn solver(&self) -> &CoordinateSolver {
        &self.solver
    }

    /// The unipotent elements indexing the basis, when it comes from
    /// apartments.
    pub fn unipotents(&self) -> &[FpMat] {
        &self.unipotents
    }

    /// Basis index of the apartment `u·A_0`.
    pub fn unipotent_index(&self, u: &FpMat) -> Option<usize> {
        self.unipotents.iter().position(|x| x == u)
    }

    pub fn chamber_count(&self) -> usize {
        self.complex.chambers().len()
    }

    pub fn top_boundary(&self) -> Option<&SparseMatrix> {
        let top = self.complex.top_degree();
        (top >= 0).then(|| self.chain_complex.boundary(top as usize))
    }

    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        match self.top_boundary() {
            None => true,
            Some(d) => d
                .mul_dense(&IMatrix::from_vec(chain.len(), 1, chain.to_vec()))
                .is_zero(),
        }
    }

    /// `g·c`, with `(g·c)[g·σ] = c[σ]`.
    pub fn act_on_chain(&self, g: &FpMat, chain: &[i64]) -> Vec<i64> {
        let mut out = vec![0; chain.len()];
        for (c, &x) in chain.iter().enumerate() {
            if x != 0 {
                out[self.complex.chamber_image(g, c)] = x;
            }
        }
        out
    }

    /// Chain of the element with the given coordinates.
    pub fn chain_of(&self, coords: &[i64]) -> Vec<i64> {
        self.basis.mul_vec(coords)
    }

    /// Integer coordinates of `chain`, or `NotInSpan`.
    pub fn express(&self, chain: &[i64]) -> Result<Vec<i64>, BuildingError> {
        let q = self.solver.coords(chain);
        let mut out = Vec::with_capacity(q.len());
        for x in q {
            if !x.is_integer() {
                return Err(BuildingError::NotInSpan);
            }
            out.push(x.to_integer().to_i64().ok_or(BuildingError::NotInSpan)?);
        }
        if self.chain_of(&out) != chain {
            return Err(BuildingError::NotInSpan);
        }
        Ok(out)
    }

    /// Matrix of `g` on the basis.
    pub fn action(&self, g: &FpMat) -> IMatrix {
        let r = self.rank();
        match &self.solver {
            CoordinateSolver::SignedRows { rows, signs } => {
                let ginv = g
                    .inverse(self.kind.field)
                    .expect("group elements are invertible");
                let mut m = IMatrix::zeros(r, r);
                for (i, (&row, &s)) in rows.iter().zip(signs).enumerate() {
                    let src = self.complex.chamber_image(&ginv, row);
                    for (j, &x) in self.basis.row(src).iter().enumerate() {
                        m[(i, j)] = s * x;
                    }
                }
                m
            }
            CoordinateSolver::Rational { .. } => {
                let cols: Vec<Vec<i64>> = (0..r)
                    .map(|j| {
                        let moved = self.act_on_chain(g, &self.basis.column(j));
                        self.express(&moved).expect("St is G-stable")
                    })
                    .collect();
                IMatrix::from_columns(r, &cols)
            }
        }
    }
}

fn unipotent_label(kind: &GroupKind, u: &FpMat) -> String {
    let ord = apartments::unipotent_order(kind);
    let mut entries = Vec::new();
    for (t, &c) in ord.iter().enumerate() {
        for &r in &ord[..t] {
            let x = u.get(r, c);
            if x != 0 || !kind.family.has_form() {
                if kind.family.has_form() {
                    entries.push(format!("{r},{c}:{x}"));
                } else {
                    entries.push(x.to_string());
                }
            }
        }
    }
    format!("u[{}]", entries.join(" "))
}
