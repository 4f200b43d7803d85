//! Group descriptors: family, rank, field and form, without enumeration.

use std::fmt;
use std::str::FromStr;

use crate::exactla::PrimeField;

use super::form::{FormKind, FormSpec};
use super::fpmat::{FpMat, FpVec};
use super::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GL,
    SL,
    Sp,
    SOnn,
    SOnn1,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::GL,
        Family::SL,
        Family::Sp,
        Family::SOnn,
        Family::SOnn1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::Sp => "Sp",
            Family::SOnn => "SOnn",
            Family::SOnn1 => "SOnn1",
        }
    }

    pub fn has_form(self) -> bool {
        matches!(self, Family::Sp | Family::SOnn | Family::SOnn1)
    }

    pub fn is_linear(self) -> bool {
        !self.has_form()
    }

    fn form_kind(self) -> FormKind {
        match self {
            Family::GL | Family::SL => FormKind::None,
            Family::Sp => FormKind::Symplectic,
            Family::SOnn => FormKind::Split,
            Family::SOnn1 => FormKind::SplitOdd,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | ',' | '-' | '{' | '}'))
            .collect();
        match t.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "sl" => Ok(Family::SL),
            "sp" => Ok(Family::Sp),
            "sonn" | "so+" | "soplus" => Ok(Family::SOnn),
            "sonn1" | "sonn+1" | "soodd" => Ok(Family::SOnn1),
            _ => Err(GroupError::UnknownFamily(s.to_string())),
        }
    }
}

/// A classical group `𝔾_n(GF(p))` described by family, rank and field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupKind {
    pub family: Family,
    pub n: usize,
    pub field: PrimeField,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sp => write!(f, "Sp_{}(F{})", 2 * self.n, self.field.p()),
            Family::SOnn => write!(f, "SO_{{{},{}}}(F{})", self.n, self.n, self.field.p()),
            Family::SOnn1 => write!(f, "SO_{{{},{}}}(F{})", self.n, self.n + 1, self.field.p()),
            fam => write!(f, "{}_{}(F{})", fam, self.n, self.field.p()),
        }
    }
}

impl GroupKind {
    pub fn new(family: Family, n: usize, p: u32) -> Result<Self, GroupError> {
        let field = PrimeField::new(p).map_err(|_| GroupError::InvalidPrime(p))?;
        Ok(GroupKind { family, n, field })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn form(&self) -> FormSpec {
        FormSpec {
            kind: self.family.form_kind(),
            n: self.n,
            field: self.field,
        }
    }

    /// Ambient dimension `m`.
    pub fn m(&self) -> usize {
        self.form().m()
    }

    /// `𝔾_k` of the same family and field.
    pub fn with_rank(&self, k: usize) -> GroupKind {
        GroupKind { n: k, ..*self }
    }

    /// `GL_ℓ` over the same field.
    pub fn gl(&self, l: usize) -> GroupKind {
        GroupKind {
            family: Family::GL,
            n: l,
            field: self.field,
        }
    }

    /// Number of positive roots: `log_q` of the Steinberg rank.
    pub fn positive_roots(&self) -> u32 {
        let n = self.n as u32;
        match self.family {
            Family::GL | Family::SL => n * n.saturating_sub(1) / 2,
            Family::Sp | Family::SOnn1 => n * n,
            Family::SOnn => n * n.saturating_sub(1),
        }
    }

    pub fn expected_steinberg_rank(&self) -> u64 {
        (self.p() as u64).pow(self.positive_roots())
    }

    pub fn contains(&self, g: &FpMat) -> bool {
        if g.dim() != self.m() {
            return false;
        }
        let det = g.det(self.field);
        if det == 0 {
            return false;
        }
        if self.family != Family::GL && det != 1 {
            return false;
        }
        self.form().preserved_by(g)
    }

    /// Order from the classical formulas (naive `SO` in characteristic 2).
    pub fn order_formula(&self) -> u128 {
        let q = self.p() as u128;
        let n = self.n as u32;
        let prod = |range: std::ops::RangeInclusive<u32>, f: &dyn Fn(u32) -> u128| -> u128 {
            range.map(f).product()
        };
        match self.family {
            Family::GL => {
                if n == 0 {
                    1
                } else {
                    prod(0..=n - 1, &|i| q.pow(n) - q.pow(i))
                }
            }
            Family::SL => {
                if n == 0 {
                    1
                } else {
                    self.gl(self.n).order_formula() / (q - 1)
                }
            }
            Family::Sp | Family::SOnn1 => q.pow(n * n) * prod(1..=n, &|i| q.pow(2 * i) - 1),
            Family::SOnn => {
                if n == 0 {
                    return 1;
                }
                let o = 2
                    * q.pow(n * (n - 1))
                    * (q.pow(n) - 1)
                    * prod(1..=n - 1, &|i| q.pow(2 * i) - 1);
                if q == 2 {
                    o
                } else {
                    o / 2
                }
            }
        }
    }

    pub fn unit(&self, i: usize) -> FpVec {
        let mut v = vec![0u8; self.m()];
        v[i] = 1;
        v
    }

    /// Generating set used for enumeration; every element is checked to be
    /// a member.
    pub fn generators(&self) -> Vec<FpMat> {
        let k = self.field;
        let m = self.m();
        let form = self.form();
        let mut gens = Vec::new();
        let zeta = k.primitive_root();
        match self.family {
            Family::GL | Family::SL => {
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            let mut g = FpMat::identity(m);
                            g.set(i, j, 1);
                            gens.push(g);
                        }
                    }
                }
                if self.family == Family::GL && m > 0 && k.p() > 2 {
                    let mut g = FpMat::identity(m);
                    g.set(0, 0, zeta as u8);
                    gens.push(g);
                }
            }
            Family::Sp => {
                let n = self.n;
                let mut vs: Vec<FpVec> = Vec::new();
                for i in 1..=n {
                    vs.push(self.unit(form.a(i)));
                    vs.push(self.unit(form.b(i)));
                    for j in i + 1..=n {
                        for (x, y) in [
                            (form.a(i), form.a(j)),
                            (form.a(i), form.b(j)),
                            (form.b(i), form.a(j)),
                            (form.b(i), form.b(j)),
                        ] {
                            let mut v = vec![0u8; m];
                            v[x] = 1;
                            v[y] = 1;
                            vs.push(v);
                        }
                    }
                }
                for v in vs {
                    gens.push(self.symplectic_transvection(&v));
                }
            }
            Family::SOnn | Family::SOnn1 => {
                let n = self.n;
                let mut singular: Vec<usize> = Vec::new();
                for i in 1..=n {
                    singular.push(form.a(i));
                    singular.push(form.b(i));
                }
                for &u in &singular {
                    let mut partners: Vec<usize> = singular
                        .iter()
                        .copied()
                        .filter(|&v| v != u && v % n != u % n)
                        .collect();
                    if self.family == Family::SOnn1 {
                        partners.push(form.e());
                    }
                    for v in partners {
                        gens.push(self.eichler(&self.unit(u), &self.unit(v)));
                    }
                }
                if n > 0 {
                    if k.p() > 2 {
                        let mut h = FpMat::identity(m);
                        h.set(form.a(1), form.a(1), zeta as u8);
                        h.set(form.b(1), form.b(1), k.inv(zeta).unwrap() as u8);
                        gens.push(h);
                    } else {
                        let mut r = FpMat::identity(m);
                        r.set(form.a(1), form.a(1), 0);
                        r.set(form.b(1), form.b(1), 0);
                        r.set(form.a(1), form.b(1), 1);
                        r.set(form.b(1), form.a(1), 1);
                        gens.push(r);
                    }
                }
            }
        }
        debug_assert!(gens.iter().all(|g| self.contains(g)));
        gens
    }

    /// `x ↦ x + ω(x, v) v`.
    pub fn symplectic_transvection(&self, v: &[u8]) -> FpMat {
        let k = self.field;
        let form = self.form();
        let m = self.m();
        let cols: Vec<FpVec> = (0..m)
            .map(|j| {
                let x = self.unit(j);
                let c = form.bilinear(&x, v);
                x.iter()
                    .zip(v)
                    .map(|(&xi, &vi)| k.add(xi as u32, k.mul(c, vi as u32)) as u8)
                    .collect()
            })
            .collect();
        FpMat::from_columns(&cols)
    }

    /// Eichler transformation for singular `u` and `v ⊥ u`:
    /// `x ↦ x + B(x,u) v − B(x,v) u − q(v) B(x,u) u`.
    pub fn eichler(&self, u: &[u8], v: &[u8]) -> FpMat {
        let k = self.field;
        let form = self.form();
        let m = self.m();
        let qv = form.quadratic(v);
        let cols: Vec<FpVec> = (0..m)
            .map(|j| {
                let x = self.unit(j);
                let bxu = form.bilinear(&x, u);
                let bxv = form.bilinear(&x, v);
                (0..m)
                    .map(|i| {
                        let mut t = x[i] as u32;
                        t = k.add(t, k.mul(bxu, v[i] as u32));
                        t = k.sub(t, k.mul(bxv, u[i] as u32));
                        t = k.sub(t, k.mul(k.mul(qv, bxu), u[i] as u32));
                        t as u8
                    })
                    .collect()
            })
            .collect();
        FpMat::from_columns(&cols)
    }

    /// Coordinates of `𝔾_{n−ℓ}` inside the ambient space, in the sub-group's
    /// own basis order: `a_{ℓ+1..n}`, then `b_{ℓ+1..n}`, then `e`.
    pub fn complement_positions(&self, l: usize) -> Vec<usize> {
        let form = self.form();
        let n = self.n;
        let mut pos: Vec<usize> = (l + 1..=n).map(|j| form.a(j)).collect();
        if self.family.has_form() {
            pos.extend((l + 1..=n).map(|j| form.b(j)));
        }
        if self.family == Family::SOnn1 {
            pos.push(form.e());
        }
        pos
    }

    /// Levi embedding of `(g1, g2) ∈ GL_ℓ × 𝔾_{n−ℓ}`. For the formed
    /// families `g1` acts on `⟨a_1..a_ℓ⟩` and its inverse transpose on
    /// `⟨b_1..b_ℓ⟩`. For `SL` the pair is embedded block-diagonally in
    /// `GL_ℓ × GL_{n−ℓ}` and membership requires `det g1 · det g2 = 1`.
    pub fn levi_embed(&self, l: usize, g1: &FpMat, g2: &FpMat) -> FpMat {
        assert!(l <= self.n);
        assert_eq!(g1.dim(), l);
        let form = self.form();
        let mut g = FpMat::identity(self.m());
        let apos: Vec<usize> = (1..=l).map(|j| form.a(j)).collect();
        g.embed(&apos, g1);
        if self.family.has_form() {
            let bpos: Vec<usize> = (1..=l).map(|j| form.b(j)).collect();
            let dual = g1
                .inverse(self.field)
                .expect("Levi factor must be invertible")
                .transpose();
            g.embed(&bpos, &dual);
        }
        let cpos = self.complement_positions(l);
        assert_eq!(g2.dim(), cpos.len());
        g.embed(&cpos, g2);
        g
    }

    /// Inverse of [`levi_embed`](Self::levi_embed) on block matrices.
    pub fn levi_split(&self, l: usize, g: &FpMat) -> (FpMat, FpMat) {
        let form = self.form();
        let apos: Vec<usize> = (1..=l).map(|j| form.a(j)).collect();
        (g.restrict(&apos), g.restrict(&self.complement_positions(l)))
    }

    /// `κ_m` for `m ∈ {1,2,3}`: `a_m ↦ a_3`, `a_3 ↦ −a_m` (same on the `b`'s),
    /// other basis vectors fixed; `κ_3 = 1`.
    pub fn kappa(&self, m: usize) -> Result<FpMat, GroupError> {
        if self.n < 3 {
            return Err(GroupError::RankTooSmall {
                n: self.n,
                needed: 3,
            });
        }
        if !(1..=3).contains(&m) {
            return Err(GroupError::LevelOutOfRange { level: m, n: 3 });
        }
        let mut g = FpMat::identity(self.m());
        if m == 3 {
            return Ok(g);
        }
        let form = self.form();
        let minus_one = self.field.neg(1) as u8;
        let mut swap = |x: usize, y: usize| {
            g.set(x, x, 0);
            g.set(y, y, 0);
            g.set(y, x, 1); // x ↦ y
            g.set(x, y, minus_one); // y ↦ −x
        };
        swap(form.a(m), form.a(3));
        if self.family.has_form() {
            swap(form.b(m), form.b(3));
        }
        Ok(g)
    }

    /// Element of determinant 1 carrying the `i`-th face of the simplex
    /// `(a_1, …, a_{p+1})` onto `(a_1, …, a_p)`: it fixes `a_1..a_i`,
    /// sends `a_j ↦ a_{j−1}` for `j ≥ i+2` and `a_{i+1} ↦ ±a_{p+1}`, with the
    /// same pattern on the `b`'s.
    pub fn transporter(&self, p: usize, i: usize) -> FpMat {
        assert!(p < self.n && i <= p);
        let form = self.form();
        let eps = if (p - i) % 2 == 0 {
            1
        } else {
            self.field.neg(1) as u8
        };
        let mut g = FpMat::identity(self.m());
        let mut shift = |pos: &dyn Fn(usize) -> usize| {
            for j in i + 1..=p + 1 {
                g.set(pos(j), pos(j), 0);
            }
            for j in i + 2..=p + 1 {
                g.set(pos(j - 1), pos(j), 1);
            }
            g.set(pos(p + 1), pos(i + 1), eps);
        };
        shift(&|j| form.a(j));
        if self.family.has_form() {
            shift(&|j| form.b(j));
        }
        g
    }
}

/// `ĥκ_m ∈ SL_3`: `e_m ↦ e_3`, `e_3 ↦ −e_m`, the remaining vector fixed.
pub fn hat_kappa(m: usize, field: PrimeField) -> FpMat {
    let kind = GroupKind {
        family: Family::SL,
        n: 3,
        field,
    };
    kind.kappa(m).expect("m in 1..=3")
}
