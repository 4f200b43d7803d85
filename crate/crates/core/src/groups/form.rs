//! The standard symplectic and quadratic forms.
//!
//! Coordinates are laid out as `a_1..a_n, b_1..b_n` and, for `SO_{n,n+1}`,
//! a final `e`. For the linear families the ambient space is `F^n` with
//! basis `a_1..a_n` and no form.

use crate::exactla::PrimeField;

use super::fpmat::FpMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// `GL_n`, `SL_n`: no form.
    None,
    /// `ω(a_j, b_j') = δ_jj'`, all other basis pairings zero.
    Symplectic,
    /// `q(Σ c_j a_j + d_j b_j) = Σ c_j d_j`.
    Split,
    /// `q(λ e + Σ c_j a_j + d_j b_j) = λ² + Σ c_j d_j`.
    SplitOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormSpec {
    pub kind: FormKind,
    pub n: usize,
    pub field: PrimeField,
}

impl FormSpec {
    /// Ambient dimension.
    pub fn m(&self) -> usize {
        match self.kind {
            FormKind::None => self.n,
            FormKind::Symplectic | FormKind::Split => 2 * self.n,
            FormKind::SplitOdd => 2 * self.n + 1,
        }
    }

    /// Index of `a_j` (1-based `j`).
    pub fn a(&self, j: usize) -> usize {
        j - 1
    }

    /// Index of `b_j` (1-based `j`).
    pub fn b(&self, j: usize) -> usize {
        debug_assert!(self.kind != FormKind::None);
        self.n + j - 1
    }

    /// Index of `e` for `SO_{n,n+1}`.
    pub fn e(&self) -> usize {
        debug_assert!(self.kind == FormKind::SplitOdd);
        2 * self.n
    }

    /// The alternating form for `Sp`, the polar form `q(x+y) − q(x) − q(y)`
    /// for the orthogonal families, zero otherwise.
    pub fn bilinear(&self, x: &[u8], y: &[u8]) -> u32 {
        let k = self.field;
        let n = self.n;
        let mut acc = 0u32;
        match self.kind {
            FormKind::None => {}
            FormKind::Symplectic => {
                for j in 0..n {
                    acc = k.add(acc, k.mul(x[j] as u32, y[n + j] as u32));
                    acc = k.sub(acc, k.mul(x[n + j] as u32, y[j] as u32));
                }
            }
            FormKind::Split | FormKind::SplitOdd => {
                for j in 0..n {
                    acc = k.add(acc, k.mul(x[j] as u32, y[n + j] as u32));
                    acc = k.add(acc, k.mul(x[n + j] as u32, y[j] as u32));
                }
                if self.kind == FormKind::SplitOdd {
                    let e = 2 * n;
                    acc = k.add(acc, k.mul(2 % k.p(), k.mul(x[e] as u32, y[e] as u32)));
                }
            }
        }
        acc
    }

    /// The quadratic form; zero for the non-orthogonal families.
    pub fn quadratic(&self, x: &[u8]) -> u32 {
        let k = self.field;
        let n = self.n;
        match self.kind {
            FormKind::None | FormKind::Symplectic => 0,
            FormKind::Split | FormKind::SplitOdd => {
                let mut acc = 0;
                for j in 0..n {
                    acc = k.add(acc, k.mul(x[j] as u32, x[n + j] as u32));
                }
                if self.kind == FormKind::SplitOdd {
                    let e = x[2 * n] as u32;
                    acc = k.add(acc, k.mul(e, e));
                }
                acc
            }
        }
    }

    /// Whether the form vanishes identically on the span of `vectors`.
    /// For quadratic forms this is `q(v_i) = 0` and `B(v_i, v_j) = 0`.
    pub fn is_totally_isotropic(&self, vectors: &[Vec<u8>]) -> bool {
        match self.kind {
            FormKind::None => true,
            _ => vectors.iter().enumerate().all(|(i, v)| {
                self.quadratic(v) == 0 && vectors[i + 1..].iter().all(|w| self.bilinear(v, w) == 0)
            }),
        }
    }

    /// Whether `g` preserves the form, checked on basis vectors. For the
    /// orthogonal families `q` is determined by its values on the basis and
    /// its polar form, so this is exact.
    pub fn preserved_by(&self, g: &FpMat) -> bool {
        if self.kind == FormKind::None {
            return true;
        }
        let m = self.m();
        let cols: Vec<Vec<u8>> = (0..m).map(|j| g.column(j)).collect();
        let unit = |i: usize| {
            let mut v = vec![0u8; m];
            v[i] = 1;
            v
        };
        for i in 0..m {
            let ei = unit(i);
            if self.quadratic(&cols[i]) != self.quadratic(&ei) {
                return false;
            }
            for j in i + 1..m {
                if self.bilinear(&cols[i], &cols[j]) != self.bilinear(&ei, &unit(j)) {
                    return false;
                }
            }
        }
        true
    }
}
