//! Apartment classes: signed sums of the full flags spanned by the vectors
//! of a frame, the alternating relation among them, and the unitriangular
//! (Solomon–Tits) basis.
//!
//! For a matrix `B` with columns `v_1..v_n` the class `⟦B⟧` is
//! `Σ_w sgn(w)·[⟨v_{w1}⟩ ⊂ ⟨v_{w1},v_{w2}⟩ ⊂ …]`; flags whose partial spans
//! have the wrong dimension contribute 0. For the formed families a
//! hyperbolic frame `(x_i; y_i)` gives the sum over signed permutations of
//! the flags `⟨z_1⟩ ⊂ … ⊂ ⟨z_1..z_n⟩` with `z_k ∈ {x_{w(k)}, y_{w(k)}}`.

use thiserror::Error;

use crate::building::{BuildingError, FlagComplex, SteinbergModule, Subspace};
use crate::exactla::{IMatrix, PrimeField};
use crate::groups::{Family, FormSpec, FpMat, FpVec, GroupKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApartmentError {
    #[error("column {0} is identically zero")]
    ZeroColumn(usize),
    #[error("expected a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize },
    #[error("apartment classes as matrices are defined for GL and SL, not {0}")]
    NotLinear(Family),
    #[error(transparent)]
    Building(#[from] BuildingError),
}

impl ApartmentError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, ApartmentError::Building(e) if e.is_capacity())
    }
}

/// A frame of the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// Vectors `v_1..v_k`, the columns of `B`.
    Linear(Vec<FpVec>),
    /// Hyperbolic pairs `(x_i, y_i)` spanning complementary isotropic
    /// subspaces.
    Hyperbolic { x: Vec<FpVec>, y: Vec<FpVec> },
}

impl Frame {
    pub fn translate(&self, g: &FpMat, k: PrimeField) -> Frame {
        let map = |vs: &[FpVec]| vs.iter().map(|v| g.apply(v, k)).collect();
        match self {
            Frame::Linear(v) => Frame::Linear(map(v)),
            Frame::Hyperbolic { x, y } => Frame::Hyperbolic {
                x: map(x),
                y: map(y),
            },
        }
    }
}

/// The frame of standard basis vectors (`a_i`, and `b_i` for the formed
/// families).
pub fn standard_frame(kind: &GroupKind) -> Frame {
    let form = kind.form();
    let x = (1..=kind.n).map(|j| kind.unit(form.a(j))).collect();
    if kind.family.has_form() {
        Frame::Hyperbolic {
            x,
            y: (1..=kind.n).map(|j| kind.unit(form.b(j))).collect(),
        }
    } else {
        Frame::Linear(x)
    }
}

/// The chain of a frame, indexed by chambers of `complex`.
pub fn frame_chain(complex: &FlagComplex, frame: &Frame) -> Result<Vec<i64>, BuildingError> {
    let kind = complex.kind();
    let m = kind.m();
    let k = kind.field;
    let mut chain = vec![0i64; complex.chambers().len()];
    let mut state = Dfs {
        complex,
        m,
        k,
        chain: &mut chain,
        flag: Vec::new(),
        picked: Vec::new(),
    };
    match frame {
        Frame::Linear(v) => state.linear(v)?,
        Frame::Hyperbolic { x, y } => state.hyperbolic(x, y)?,
    }
    Ok(chain)
}

struct Dfs<'a> {
    complex: &'a FlagComplex,
    m: usize,
    k: PrimeField,
    chain: &'a mut Vec<i64>,
    flag: Vec<Subspace>,
    picked: Vec<usize>,
}

impl Dfs<'_> {
    fn span_with(&self, vs: &[FpVec], extra: &FpVec) -> Subspace {
        let mut all = vs.to_vec();
        all.push(extra.clone());
        Subspace::span(self.m, &all, self.k)
    }

    fn record(&mut self, sign: i64) -> Result<(), BuildingError> {
        let c = self.complex.chamber_of_flag(&self.flag).ok_or_else(|| {
            BuildingError::Malformed(format!("frame flag {:?} is not a chamber", self.flag))
        })?;
        self.chain[c] += sign;
        Ok(())
    }

    /// Flags of length `n − 1` from permutations of `v`.
    fn linear(&mut self, v: &[FpVec]) -> Result<(), BuildingError> {
        let n = v.len();
        if self.picked.len() + 1 >= n {
            let last = (0..n).find(|i| !self.picked.contains(i)).unwrap_or(0);
            let mut w = self.picked.clone();
            if n > 0 {
                w.push(last);
            }
            return self.record(permutation_sign(&w));
        }
        let prefix: Vec<FpVec> = self.picked.iter().map(|&i| v[i].clone()).collect();
        for i in 0..n {
            if self.picked.contains(&i) {
                continue;
            }
            let s = self.span_with(&prefix, &v[i]);
            if s.dim() != prefix.len() + 1 {
                continue;
            }
            self.flag.push(s);
            self.picked.push(i);
            self.linear(v)?;
            self.picked.pop();
            self.flag.pop();
        }
        Ok(())
    }

    /// Flags of length `n` from signed permutations; `picked` stores
    /// `2i` for `x_i` and `2i + 1` for `y_i`.
    fn hyperbolic(&mut self, x: &[FpVec], y: &[FpVec]) -> Result<(), BuildingError> {
        let n = x.len();
        if self.picked.len() == n {
            let w: Vec<usize> = self.picked.iter().map(|t| t / 2).collect();
            let flips = self.picked.iter().filter(|t| *t % 2 == 1).count();
            let sign = permutation_sign(&w) * if flips % 2 == 0 { 1 } else { -1 };
            return self.record(sign);
        }
        let prefix: Vec<FpVec> = self
            .picked
            .iter()
            .map(|&t| {
                if t % 2 == 0 {
                    x[t / 2].clone()
                } else {
                    y[t / 2].clone()
                }
            })
            .collect();
        for i in 0..n {
            if self.picked.iter().any(|t| t / 2 == i) {
                continue;
            }
            for (t, v) in [(2 * i, &x[i]), (2 * i + 1, &y[i])] {
                let s = self.span_with(&prefix, v);
                if s.dim() != prefix.len() + 1 {
                    continue;
                }
                self.flag.push(s);
                self.picked.push(t);
                self.hyperbolic(x, y)?;
                self.picked.pop();
                self.flag.pop();
            }
        }
        Ok(())
    }
}

/// Sign of a permutation given as a sequence of distinct indices.
pub fn permutation_sign(w: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Basis order in which `U_B` is upper unitriangular: `a_1..a_n`, then `e`,
/// then `b_n..b_1`.
pub fn unipotent_order(kind: &GroupKind) -> Vec<usize> {
    let form = kind.form();
    let mut ord: Vec<usize> = (1..=kind.n).map(|j| form.a(j)).collect();
    if kind.family == Family::SOnn1 {
        ord.push(form.e());
    }
    if kind.family.has_form() {
        ord.extend((1..=kind.n).rev().map(|j| form.b(j)));
    }
    ord
}

/// The unipotent radical `U_B` of the standard Borel subgroup: members of
/// `kind` that are upper unitriangular in [`unipotent_order`]. Listed in
/// lexicographic order of their columns, earlier entries more significant;
/// for `GL_3` the element with entries `(x, y, z)` at `(1,2), (1,3), (2,3)`
/// has index `x·p² + y·p + z`.
pub fn borel_unipotents(kind: &GroupKind) -> Vec<FpMat> {
    let ord = unipotent_order(kind);
    let form = kind.form();
    let mut out = Vec::new();
    let mut cols: Vec<FpVec> = Vec::new();
    unipotent_search(kind, &form, &ord, &mut cols, &mut out);
    out
}

fn unipotent_search(
    kind: &GroupKind,
    form: &FormSpec,
    ord: &[usize],
    cols: &mut Vec<FpVec>,
    out: &mut Vec<FpMat>,
) {
    let m = kind.m();
    let t = cols.len();
    if t == ord.len() {
        let mut g = FpMat::identity(m);
        for (s, c) in cols.iter().enumerate() {
            for i in 0..m {
                g.set(i, ord[s], c[i]);
            }
        }
        out.push(g);
        return;
    }
    let p = kind.p() as usize;
    let formed = kind.family.has_form();
    let total = p.pow(t as u32);
    for idx in 0..total {
        // Earlier coefficients are more significant.
        let mut v = kind.unit(ord[t]);
        let mut x = idx;
        for s in (0..t).rev() {
            v[ord[s]] = (x % p) as u8;
            x /= p;
        }
        if formed {
            let e_t = kind.unit(ord[t]);
            if form.quadratic(&v) != form.quadratic(&e_t) {
                continue;
            }
            let ok = (0..t).all(|s| {
                let e_s = kind.unit(ord[s]);
                form.bilinear(&cols[s], &v) == form.bilinear(&e_s, &e_t)
                    && form.bilinear(&v, &cols[s]) == form.bilinear(&e_t, &e_s)
            }) && form.bilinear(&v, &v) == form.bilinear(&e_t, &e_t);
            if !ok {
                continue;
            }
        }
        cols.push(v);
        unipotent_search(kind, form, ord, cols, out);
        cols.pop();
    }
}

/// An `n × k` matrix over GF(p) with no zero column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentInput {
    rows: usize,
    columns: Vec<FpVec>,
}

impl ApartmentInput {
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self, ApartmentError> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(ApartmentError::Shape { rows: n, cols: k });
        }
        let columns = (0..k)
            .map(|j| rows.iter().map(|r| field.reduce(r[j]) as u8).collect())
            .collect();
        Self::from_columns(n, columns)
    }

    pub fn from_columns(rows: usize, columns: Vec<FpVec>) -> Result<Self, ApartmentError> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(ApartmentError::Shape {
                    rows,
                    cols: columns.len(),
                });
            }
            if c.iter().all(|&x| x == 0) {
                return Err(ApartmentError::ZeroColumn(j));
            }
        }
        Ok(ApartmentInput { rows, columns })
    }

    pub fn from_matrix(g: &FpMat) -> Self {
        Self::from_columns(g.dim(), (0..g.dim()).map(|j| g.column(j)).collect())
            .expect("invertible matrices have no zero column")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[FpVec] {
        &self.columns
    }

    /// The square matrix with column `i` removed.
    pub fn drop_column(&self, i: usize) -> ApartmentInput {
        let mut columns = self.columns.clone();
        columns.remove(i);
        ApartmentInput {
            rows: self.rows,
            columns,
        }
    }

    /// `g·B`.
    pub fn left_mul(&self, g: &FpMat, k: PrimeField) -> ApartmentInput {
        ApartmentInput {
            rows: self.rows,
            columns: self.columns.iter().map(|c| g.apply(c, k)).collect(),
        }
    }
}

/// `⟦B⟧` as a chain, with coordinates in the module basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentClass {
    pub chain: Vec<i64>,
    pub coords: Vec<i64>,
}

fn check_linear(
    st: &SteinbergModule,
    b: &ApartmentInput,
    cols: usize,
) -> Result<(), ApartmentError> {
    let kind = st.kind();
    if !kind.family.is_linear() {
        return Err(ApartmentError::NotLinear(kind.family));
    }
    if b.rows != kind.n || b.columns.len() != cols {
        return Err(ApartmentError::Shape { rows: kind.n, cols });
    }
    Ok(())
}

/// Chain of `⟦B⟧` for square `B`, without solving for coordinates.
pub fn apartment_chain(
    st: &SteinbergModule,
    b: &ApartmentInput,
) -> Result<Vec<i64>, ApartmentError> {
    check_linear(st, b, st.kind().n)?;
    Ok(frame_chain(
        st.complex(),
        &Frame::Linear(b.columns.clone()),
    )?)
}

pub fn apartment_class(
    st: &SteinbergModule,
    b: &ApartmentInput,
) -> Result<ApartmentClass, ApartmentError> {
    let chain = apartment_chain(st, b)?;
    let coords = st.express(&chain)?;
    Ok(ApartmentClass { chain, coords })
}

/// `Σ_i (−1)^i ⟦B_i⟧` for an `n × (n+1)` matrix, `B_i` omitting column `i`.
/// The result is expected to be the zero chain.
pub fn verify_relation(
    st: &SteinbergModule,
    b: &ApartmentInput,
) -> Result<Vec<i64>, ApartmentError> {
    let n = st.kind().n;
    check_linear(st, b, n + 1)?;
    let mut total = vec![0i64; st.chamber_count()];
    for i in 0..=n {
        let c = apartment_chain(st, &b.drop_column(i))?;
        let s = if i % 2 == 0 { 1 } else { -1 };
        for (t, x) in total.iter_mut().zip(c) {
            *t += s * x;
        }
    }
    Ok(total)
}

/// The unitriangular basis matrix of `St_{GL_n}`, columns indexed by
/// [`borel_unipotents`].
pub fn solomon_tits_basis(st: &SteinbergModule) -> Result<&IMatrix, ApartmentError> {
    if !st.kind().family.is_linear() {
        return Err(ApartmentError::NotLinear(st.kind().family));
    }
    if st.unipotents().is_empty() {
        return Err(
            BuildingError::BasisExtraction("unitriangular classes are not a basis".into()).into(),
        );
    }
    Ok(st.basis())
}

/// Coordinates of a top-degree chain in the module basis.
pub fn express_in_basis(st: &SteinbergModule, chain: &[i64]) -> Result<Vec<i64>, ApartmentError> {
    Ok(st.express(chain)?)
}
