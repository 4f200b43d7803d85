//! Smith normal form and related integer lattice computations.
//!
//! Two engines live here. [`smith_normal_form`] is a dense routine that also
//! returns the unimodular transforms. [`invariant_factors`] and
//! [`SparseMatrix::invariant_factors`] first eliminate unit pivots on a
//! sparse representation with checked `i64` arithmetic (restarting with
//! `BigInt` on overflow) and only run the dense routine on what is left.
//! Chain complexes of buildings and bar resolutions are mostly unit pivots,
//! so the dense remainder is tiny.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::scalar::{FieldScalar, Gf, IntegerScalar};
use super::{IMatrix, ZMatrix};

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub d: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntegerScalar> Smith<T> {
    /// The nonzero diagonal entries (all positive).
    pub fn invariant_factors(&self) -> Vec<T> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Dense Smith normal form with transforms.
pub fn smith_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> Smith<T> {
    let (d, u, v) = dense_smith(m.clone(), true);
    Smith {
        d,
        u: u.expect("tracked"),
        v: v.expect("tracked"),
    }
}

fn dense_smith<T: IntegerScalar>(
    mut a: Matrix<T>,
    track: bool,
) -> (Matrix<T>, Option<Matrix<T>>, Option<Matrix<T>>) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut u = track.then(|| Matrix::<T>::identity(rows));
    let mut v = track.then(|| Matrix::<T>::identity(cols));

    // row_i <- row_i - q * row_t
    fn row_axpy<T: IntegerScalar>(m: &mut Matrix<T>, i: usize, t: usize, q: &T) {
        for j in 0..m.cols() {
            if !m[(t, j)].is_zero() {
                let x = m[(i, j)].clone() - q.clone() * m[(t, j)].clone();
                m[(i, j)] = x;
            }
        }
    }
    fn col_axpy<T: IntegerScalar>(m: &mut Matrix<T>, j: usize, t: usize, q: &T) {
        for i in 0..m.rows() {
            if !m[(i, t)].is_zero() {
                let x = m[(i, j)].clone() - q.clone() * m[(i, t)].clone();
                m[(i, j)] = x;
            }
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &a[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, bi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, bj);
        }

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                if let Some(u) = u.as_mut() {
                    row_axpy(u, i, t, &q);
                }
                if !a[(i, t)].is_zero() {
                    a.swap_rows(i, t);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(i, t);
                    }
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                if let Some(v) = v.as_mut() {
                    col_axpy(v, j, t, &q);
                }
                if !a[(t, j)].is_zero() {
                    a.swap_cols(j, t);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(j, t);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: fold an offending row into row t.
            let piv = a[(t, t)].clone();
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let minus_one = -T::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    if let Some(u) = u.as_mut() {
                        row_axpy(u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -a[(t, j)].clone();
                a[(t, j)] = x;
            }
            if let Some(u) = u.as_mut() {
                for j in 0..rows {
                    let x = -u[(t, j)].clone();
                    u[(t, j)] = x;
                }
            }
        }
        t += 1;
    }
    (a, u, v)
}

/// Coefficient arithmetic for the sparse engine; `None` signals overflow.
trait Coef: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(x: i64) -> Self;
    fn is_zero_c(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - b * c`
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self>;
    fn mul_c(a: &Self, b: &Self) -> Option<Self>;
    /// Inverse of a unit.
    fn unit_inverse(&self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }
    fn is_zero_c(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self> {
        a.checked_sub(b.checked_mul(*c)?)
    }
    fn mul_c(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn unit_inverse(&self) -> Self {
        *self
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self> {
        Some(a - b * c)
    }
    fn mul_c(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn unit_inverse(&self) -> Self {
        self.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

impl<const P: u32> Coef for Gf<P> {
    fn from_i64(x: i64) -> Self {
        Gf::new(x)
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self) -> Option<Self> {
        Some(*a - *b * *c)
    }
    fn mul_c(a: &Self, b: &Self) -> Option<Self> {
        Some(*a * *b)
    }
    fn unit_inverse(&self) -> Self {
        self.inverse().expect("nonzero")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(self.value())
    }
}

/// Integer matrix in coordinate form, used for boundary maps that are too
/// large to hold densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// Per row, `(column, value)` sorted by column, no zeros.
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Sums duplicate coordinates and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); rows];
        for &(i, j, x) in triplets {
            assert!(
                i < rows && j < cols,
                "triplet ({i},{j}) out of range {rows}x{cols}"
            );
            *acc[i].entry(j).or_insert(0) += x;
        }
        let data = acc
            .into_iter()
            .map(|r| r.into_iter().filter(|&(_, x)| x != 0).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(m: &IMatrix) -> Self {
        let data = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j, x))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row_entries(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    /// `(row, col, value)` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, x)| (i, j, x)))
            .collect()
    }

    pub fn to_dense(&self) -> IMatrix {
        let mut m = IMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for &(j, x) in r {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// Appends the columns of `other` to the right.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|&(j, x)| (j + self.cols, x)));
                r
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// `self * other` (sparse times dense).
    pub fn mul_dense(&self, other: &IMatrix) -> IMatrix {
        assert_eq!(self.cols, other.rows());
        let mut out = IMatrix::zeros(self.rows, other.cols());
        for (i, r) in self.data.iter().enumerate() {
            for &(k, x) in r {
                for j in 0..other.cols() {
                    let y = other[(k, j)];
                    if y != 0 {
                        out[(i, j)] += x * y;
                    }
                }
            }
        }
        out
    }

    /// Whether `self * other == 0` for a sparse `other`.
    pub fn composes_to_zero(&self, other: &SparseMatrix) -> bool {
        assert_eq!(self.cols, other.rows);
        // Column-wise: for each column of `other`, accumulate self * column.
        let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.cols];
        for (k, r) in other.data.iter().enumerate() {
            for &(j, x) in r {
                by_col[j].push((k, x));
            }
        }
        let mut self_cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for &(k, x) in r {
                self_cols[k].push((i, x));
            }
        }
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for col in by_col {
            acc.clear();
            for (k, y) in col {
                for &(i, x) in &self_cols[k] {
                    *acc.entry(i).or_insert(0) += x * y;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return false;
            }
        }
        true
    }

    /// Nonzero invariant factors, sorted so that each divides the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        match eliminate::<i64>(self) {
            Some(f) => f,
            None => eliminate::<BigInt>(self).expect("big integers do not overflow"),
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Rank after reduction mod `p`.
    pub fn rank_mod(&self, p: u32) -> usize {
        crate::dispatch_prime!(p, F => eliminate::<F>(self).expect("field arithmetic").len())
    }
}

fn eliminate<T: Coef>(m: &SparseMatrix) -> Option<Vec<BigInt>> {
    let mut rows: Vec<Option<Vec<(usize, T)>>> = m
        .data
        .iter()
        .map(|r| Some(r.iter().map(|&(j, x)| (j, T::from_i64(x))).collect()))
        .collect();
    let mut col_count = vec![0usize; m.cols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols];
    for (i, r) in m.data.iter().enumerate() {
        for &(j, _) in r {
            col_count[j] += 1;
            col_rows[j].push(i);
        }
    }
    let mut units = 0usize;
    loop {
        // Markowitz-style choice among unit entries.
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for (i, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (j, x) in r {
                if x.is_unit() {
                    let cost = (r.len() - 1) * (col_count[*j] - 1);
                    if best.map_or(true, |(_, _, c)| cost < c) {
                        best = Some((i, *j, cost));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let prow = rows[pi].take().expect("active pivot row");
        let pval = prow
            .iter()
            .find(|(j, _)| *j == pj)
            .map(|(_, x)| x.clone())
            .expect("pivot entry");
        for (j, _) in &prow {
            col_count[*j] -= 1;
        }
        let targets = std::mem::take(&mut col_rows[pj]);
        for i in targets {
            let Some(r) = rows[i].as_mut() else { continue };
            let Some(f) = r.iter().find(|(j, _)| *j == pj).map(|(_, x)| x.clone()) else {
                continue;
            };
            // row_i <- row_i - (f / pval) * prow
            let factor = T::mul_c(&f, &pval.unit_inverse())?;
            let mut merged = Vec::with_capacity(r.len() + prow.len());
            let (mut a, mut b) = (0, 0);
            while a < r.len() || b < prow.len() {
                let ja = r.get(a).map(|e| e.0);
                let jb = prow.get(b).map(|e| e.0);
                match (ja, jb) {
                    (Some(x), Some(y)) if x == y => {
                        let v = T::mul_sub(&r[a].1, &factor, &prow[b].1)?;
                        if v.is_zero_c() {
                            col_count[x] -= 1;
                        } else {
                            merged.push((x, v));
                        }
                        a += 1;
                        b += 1;
                    }
                    (Some(x), Some(y)) if x < y => {
                        merged.push(r[a].clone());
                        a += 1;
                    }
                    (Some(x), None) => {
                        let _ = x;
                        merged.push(r[a].clone());
                        a += 1;
                    }
                    (_, Some(y)) => {
                        let v = T::mul_sub(&T::from_i64(0), &factor, &prow[b].1)?;
                        merged.push((y, v));
                        col_count[y] += 1;
                        col_rows[y].push(i);
                        b += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            *r = merged;
        }
        units += 1;
    }

    // Dense remainder.
    let live_rows: Vec<&Vec<(usize, T)>> =
        rows.iter().flatten().filter(|r| !r.is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut d = ZMatrix::zeros(live_rows.len(), live_cols.len());
        for (i, r) in live_rows.iter().enumerate() {
            for (j, x) in r.iter() {
                d[(i, pos[j])] = x.to_big();
            }
        }
        let (d, _, _) = dense_smith(d, false);
        for k in 0..d.rows().min(d.cols()) {
            if !d[(k, k)].is_zero() {
                out.push(d[(k, k)].clone());
            }
        }
    }
    Some(out)
}

/// Nonzero invariant factors of an integer matrix.
pub fn invariant_factors(m: &IMatrix) -> Vec<BigInt> {
    SparseMatrix::from_dense(m).invariant_factors()
}

pub fn rank(m: &IMatrix) -> usize {
    invariant_factors(m).len()
}

/// True when every invariant factor is 1 and there are `min(rows, cols)` of
/// them: the columns (or rows) extend to a basis of the ambient lattice.
pub fn is_unimodular_rank(m: &IMatrix) -> bool {
    let f = invariant_factors(m);
    f.len() == m.rows().min(m.cols()) && f.iter().all(One::is_one)
}

/// Whether every column of `vs` lies in the ℤ-span of the columns of `a`.
///
/// Adding columns from the span leaves the invariant factors unchanged, and
/// conversely equal invariant factors force the two lattices to coincide.
pub fn span_contains(a: &SparseMatrix, vs: &SparseMatrix) -> bool {
    a.invariant_factors() == a.hstack(vs).invariant_factors()
}

pub fn span_contains_dense(a: &IMatrix, vs: &IMatrix) -> bool {
    span_contains(&SparseMatrix::from_dense(a), &SparseMatrix::from_dense(vs))
}

/// Columns form a ℤ-basis of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IMatrix) -> IMatrix {
    let s = smith_normal_form(&to_big(m));
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    from_big(&s.v.select_cols(&idx)).expect("kernel basis entries fit in i64")
}

/// Integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IMatrix, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(b.len(), m.rows());
    let s = smith_normal_form(&to_big(m));
    let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let ub = s.u.mul_vec(&bb);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, x) in ub.iter().enumerate() {
        if i < r {
            let d = &s.d[(i, i)];
            if !x.is_multiple_of(d) {
                return None;
            }
            y[i] = x / d;
        } else if !x.is_zero() {
            return None;
        }
    }
    s.v.mul_vec(&y).iter().map(ToPrimitive::to_i64).collect()
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &IMatrix) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = to_big(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = x;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Inverse of a unimodular integer matrix; `None` if `det != ±1`.
pub fn unimodular_inverse(m: &IMatrix) -> Option<IMatrix> {
    let s = smith_normal_form(&to_big(m));
    if !m.is_square() || s.rank() != m.rows() || !s.invariant_factors().iter().all(One::is_one) {
        return None;
    }
    // u m v = 1  =>  m^{-1} = v u
    from_big(&s.v.mul(&s.u))
}

pub fn to_big(m: &IMatrix) -> ZMatrix {
    m.map(|&x| BigInt::from(x))
}

pub fn from_big(m: &ZMatrix) -> Option<IMatrix> {
    let data: Option<Vec<i64>> = m.data().iter().map(ToPrimitive::to_i64).collect();
    Some(IMatrix::from_vec(m.rows(), m.cols(), data?))
}
