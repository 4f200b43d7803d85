//! Reeder product and projection, stabilization, and the maps `π`, `ζ_m`,
//! `ζ : St_{GL_3} → St_{GL_2}`.
//!
//! The product map sends `⟦u_1⟧ ⊗ ⟦u_2⟧` to the apartment of the frame
//! `levi_embed(u_1, u_2)·(a; b)`: for `GL`/`SL` this is
//! `⟦diag(u_1, u_2)⟧`, for the formed families the `b`-block carries the
//! dual frame. Only its `L`-equivariance and the decomposition
//! `St_𝔾n = ⊕_u u·(St_GLℓ ⊗ St_𝔾n−ℓ)` are used, and both are checked.
//!
//! The projection follows `u·x ↦ x`: it is the sum of the components of
//! the decomposition, not the identity component alone.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::apartments::{self, ApartmentError, ApartmentInput};
use crate::building::{BuildingError, SteinbergModule};
use crate::exactla::{self, snf, IMatrix};
use crate::groups::{hat_kappa, Family, FpMat, GroupError, GroupKind, SubgroupFilter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReederError {
    #[error("{0} has no apartment basis")]
    NoApartmentBasis(String),
    #[error("product map for level {l} has rank {rank}, expected {expected}")]
    RankDefect {
        l: usize,
        rank: usize,
        expected: usize,
    },
    #[error("translates give a {rows}x{cols} block, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("decomposition block has determinant {0}")]
    NotUnimodular(BigInt),
    #[error("{0}")]
    Disagreement(String),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Apartment(#[from] ApartmentError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl ReederError {
    pub fn is_capacity(&self) -> bool {
        match self {
            ReederError::Building(e) => e.is_capacity(),
            ReederError::Apartment(e) => e.is_capacity(),
            ReederError::Group(e) => e.is_capacity(),
            _ => false,
        }
    }
}

/// `U_n^ℓ`, listed inside `U_B` in the order of
/// [`apartments::borel_unipotents`].
pub fn unipotent_radical(kind: &GroupKind, l: usize) -> Vec<FpMat> {
    apartments::borel_unipotents(kind)
        .into_iter()
        .filter(|u| SubgroupFilter::Unipotent(l).admits(kind, u))
        .collect()
}

/// Matrix of `St_{GL_ℓ} ⊗ St_{𝔾_{n−ℓ}} → St_{𝔾_n}` on apartment bases;
/// column `i·r2 + k` is the image of `e_i ⊗ e_k`.
#[derive(Clone, Debug)]
pub struct ProductMap {
    pub kind: GroupKind,
    pub l: usize,
    pub r1: usize,
    pub r2: usize,
    pub matrix: IMatrix,
}

pub fn reeder_product(
    big: &SteinbergModule,
    gl: &SteinbergModule,
    sub: &SteinbergModule,
    l: usize,
) -> Result<ProductMap, ReederError> {
    let kind = *big.kind();
    for m in [gl, sub] {
        if m.unipotents().is_empty() {
            return Err(ReederError::NoApartmentBasis(m.kind().to_string()));
        }
    }
    let frame = apartments::standard_frame(&kind);
    let (r1, r2) = (gl.rank(), sub.rank());
    let mut cols = Vec::with_capacity(r1 * r2);
    for u1 in gl.unipotents() {
        for u2 in sub.unipotents() {
            let g = kind.levi_embed(l, u1, u2);
            let chain = apartments::frame_chain(big.complex(), &frame.translate(&g, kind.field))?;
            cols.push(big.express(&chain)?);
        }
    }
    let matrix = IMatrix::from_columns(big.rank(), &cols);
    let rank = snf::rank(&matrix);
    if rank != r1 * r2 {
        return Err(ReederError::RankDefect {
            l,
            rank,
            expected: r1 * r2,
        });
    }
    Ok(ProductMap {
        kind,
        l,
        r1,
        r2,
        matrix,
    })
}

impl ProductMap {
    /// `product(ρ(g1)x ⊗ ρ(g2)y) = ρ(embed(g1, g2))·product(x ⊗ y)` as a
    /// matrix identity.
    pub fn is_equivariant(
        &self,
        big: &SteinbergModule,
        gl: &SteinbergModule,
        sub: &SteinbergModule,
        g1: &FpMat,
        g2: &FpMat,
    ) -> bool {
        let lhs = self.matrix.mul(&gl.action(g1).kron(&sub.action(g2)));
        let rhs = big
            .action(&self.kind.levi_embed(self.l, g1, g2))
            .mul(&self.matrix);
        lhs == rhs
    }

    /// Whether the columns are top-degree cycles once mapped to chains.
    pub fn columns_are_cycles(&self, big: &SteinbergModule) -> bool {
        (0..self.matrix.cols()).all(|j| big.is_cycle(&big.chain_of(&self.matrix.column(j))))
    }
}

/// Evidence for `St_𝔾n = ⊕_{u ∈ U_n^ℓ} u·(St_GLℓ ⊗ St_𝔾n−ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub kind: GroupKind,
    pub l: usize,
    pub unipotent_order: usize,
    pub r1: usize,
    pub r2: usize,
    /// Rank of each translate `ρ(u)·P`.
    pub translates: Vec<usize>,
    pub combined_rank: usize,
    pub target_rank: usize,
    pub determinant: BigInt,
}

impl DecompositionCertificate {
    pub fn holds(&self) -> bool {
        self.combined_rank == self.target_rank
            && self.unipotent_order * self.r1 * self.r2 == self.target_rank
            && self.determinant.abs().is_one()
    }
}

/// The product map with its `U`-translates and the inverse of the
/// resulting block matrix.
#[derive(Clone, Debug)]
pub struct ReederDecomposition {
    pub product: ProductMap,
    pub unipotent: Vec<FpMat>,
    /// `[ρ(u)·P]_u`, square.
    pub block: IMatrix,
    pub block_inverse: IMatrix,
    pub certificate: DecompositionCertificate,
}

impl ReederDecomposition {
    pub fn new(
        big: &SteinbergModule,
        gl: &SteinbergModule,
        sub: &SteinbergModule,
        l: usize,
    ) -> Result<Self, ReederError> {
        let product = reeder_product(big, gl, sub, l)?;
        let kind = *big.kind();
        let unipotent = unipotent_radical(&kind, l);
        let blocks: Vec<IMatrix> = unipotent
            .iter()
            .map(|u| big.action(u).mul(&product.matrix))
            .collect();
        let translates = blocks.iter().map(snf::rank).collect();
        let block = IMatrix::hstack_all(big.rank(), &blocks);
        let combined_rank = snf::rank(&block);
        let determinant = if block.is_square() {
            snf::determinant(&block)
        } else {
            BigInt::zero()
        };
        let certificate = DecompositionCertificate {
            kind,
            l,
            unipotent_order: unipotent.len(),
            r1: product.r1,
            r2: product.r2,
            translates,
            combined_rank,
            target_rank: big.rank(),
            determinant: determinant.clone(),
        };
        if !block.is_square() {
            return Err(ReederError::NotSquare {
                rows: block.rows(),
                cols: block.cols(),
            });
        }
        let block_inverse =
            exactla::unimodular_inverse(&block).ok_or(ReederError::NotUnimodular(determinant))?;
        Ok(ReederDecomposition {
            product,
            unipotent,
            block,
            block_inverse,
            certificate,
        })
    }

    fn width(&self) -> usize {
        self.product.r1 * self.product.r2
    }

    /// Components `y_u` with `x = Σ_u ρ(u)·P(y_u)`, in the order of
    /// `self.unipotent`.
    pub fn components(&self, x: &[i64]) -> Vec<Vec<i64>> {
        let y = self.block_inverse.mul_vec(x);
        y.chunks(self.width()).map(<[i64]>::to_vec).collect()
    }

    /// The component at `u = 1` (the first listed element).
    pub fn identity_component(&self, x: &[i64]) -> Vec<i64> {
        debug_assert!(self.unipotent[0].is_identity());
        self.components(x).swap_remove(0)
    }

    /// `Σ_u ρ(u)·P(y_u)`.
    pub fn reassemble(&self, components: &[Vec<i64>]) -> Vec<i64> {
        let flat: Vec<i64> = components.concat();
        self.block.mul_vec(&flat)
    }

    /// The Reeder projection `u·y ↦ y`.
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.width()];
        for c in self.components(x) {
            for (o, v) in out.iter_mut().zip(c) {
                *o += v;
            }
        }
        out
    }

    /// Matrix of [`project`](Self::project): `(r1·r2) × rank St_𝔾n`.
    pub fn projection_matrix(&self) -> IMatrix {
        let w = self.width();
        let k = self.unipotent.len();
        let sum = IMatrix::from_fn(w, w * k, |i, j| i64::from(j % w == i));
        sum.mul(&self.block_inverse)
    }

    /// Matrix of the identity-component retraction.
    pub fn identity_component_matrix(&self) -> IMatrix {
        let w = self.width();
        let idx: Vec<usize> = (0..w).collect();
        self.block_inverse.select_rows(&idx)
    }
}

/// The three modules needed for level `ℓ` of `kind`.
pub struct ReederModules {
    pub big: SteinbergModule,
    pub gl: SteinbergModule,
    pub sub: SteinbergModule,
}

impl ReederModules {
    pub fn new(kind: GroupKind, l: usize, capacity: u64) -> Result<Self, ReederError> {
        if l == 0 || l > kind.n {
            return Err(GroupError::LevelOutOfRange {
                level: l,
                n: kind.n,
            }
            .into());
        }
        Ok(ReederModules {
            big: SteinbergModule::new(kind, capacity)?,
            gl: SteinbergModule::new(kind.gl(l), capacity)?,
            sub: SteinbergModule::new(kind.with_rank(kind.n - l), capacity)?,
        })
    }

    pub fn decomposition(&self, l: usize) -> Result<ReederDecomposition, ReederError> {
        ReederDecomposition::new(&self.big, &self.gl, &self.sub, l)
    }
}

/// Builds the modules and the decomposition certificate for `(kind, ℓ)`.
pub fn verify_decomposition(
    kind: GroupKind,
    l: usize,
    capacity: u64,
) -> Result<DecompositionCertificate, ReederError> {
    let m = ReederModules::new(kind, l, capacity)?;
    Ok(m.decomposition(l)?.certificate)
}

/// `St_{𝔾_{n−1}} → St_{𝔾_n}`: the `ℓ = 1` product with `St_{GL_1} = R`.
pub fn stabilization_map(kind: GroupKind, capacity: u64) -> Result<IMatrix, ReederError> {
    let m = ReederModules::new(kind, 1, capacity)?;
    let p = reeder_product(&m.big, &m.gl, &m.sub, 1)?;
    debug_assert_eq!(p.r1, 1);
    Ok(p.matrix)
}

/// `St_{GL_3}`, `St_{GL_2}` and the `ℓ = 2` decomposition of `St_{GL_3}`.
pub struct Gl3Data {
    pub field: crate::PrimeField,
    pub st3: SteinbergModule,
    pub st2: SteinbergModule,
    pub decomposition: ReederDecomposition,
}

impl Gl3Data {
    pub fn new(p: u32, capacity: u64) -> Result<Self, ReederError> {
        let kind = GroupKind::new(Family::GL, 3, p)?;
        let m = ReederModules::new(kind, 2, capacity)?;
        let decomposition = m.decomposition(2)?;
        Ok(Gl3Data {
            field: kind.field,
            st3: m.big,
            st2: m.gl,
            decomposition,
        })
    }

    /// Coordinates of `⟦B⟧` in `St_{GL_3}` (or `St_{GL_2}` for 2×2 input).
    pub fn class(&self, rows: &[Vec<i64>]) -> Result<Vec<i64>, ReederError> {
        let b = ApartmentInput::from_rows(self.field, rows)?;
        let st = if rows.len() == 3 {
            &self.st3
        } else {
            &self.st2
        };
        Ok(apartments::apartment_class(st, &b)?.coords)
    }
}

/// `π: St_{GL_3} → St_{GL_2}`, the Reeder projection for `ℓ = 2` followed
/// by `St_{GL_1} = R`. Checked against `π⟦1 x y; 0 1 z; 0 0 1⟧ = ⟦1 x; 0 1⟧`.
pub fn pi_map(data: &Gl3Data) -> Result<IMatrix, ReederError> {
    let pi = data.decomposition.projection_matrix();
    let p = data.field.p() as usize;
    for (idx, u) in data.st3.unipotents().iter().enumerate() {
        let x = u.get(0, 1) as usize;
        let col = pi.column(idx);
        let target = data
            .st2
            .unipotents()
            .iter()
            .position(|v| v.get(0, 1) as usize == x)
            .expect("every x occurs");
        let expected: Vec<i64> = (0..p).map(|i| i64::from(i == target)).collect();
        if col != expected {
            return Err(ReederError::Disagreement(format!(
                "π on {} gives {col:?}, closed form gives {expected:?}",
                data.st3.labels()[idx]
            )));
        }
    }
    Ok(pi)
}

/// `ζ_1, ζ_2, ζ_3`, `ζ = ζ_1 − ζ_2 + ζ_3`, and `ζ'` built the same way from
/// the transporters of the differential instead of `ĥκ_m`.
#[derive(Clone, Debug)]
pub struct ZetaMaps {
    pub pi: IMatrix,
    pub components: [IMatrix; 3],
    pub zeta: IMatrix,
    pub zeta_prime: IMatrix,
}

pub fn zeta_maps(data: &Gl3Data) -> Result<ZetaMaps, ReederError> {
    let pi = pi_map(data)?;
    let f = data.field;
    let comp = |g: &FpMat| pi.mul(&data.st3.action(g));
    let components = [
        comp(&hat_kappa(1, f)),
        comp(&hat_kappa(2, f)),
        comp(&hat_kappa(3, f)),
    ];
    let zeta = components[0].sub(&components[1]).add(&components[2]);
    let sl3 = GroupKind::new(Family::SL, 3, f.p())?;
    let t: Vec<IMatrix> = (0..3).map(|i| comp(&sl3.transporter(2, i))).collect();
    let zeta_prime = t[0].sub(&t[1]).add(&t[2]);
    Ok(ZetaMaps {
        pi,
        components,
        zeta,
        zeta_prime,
    })
}

/// Surjectivity of `ζ` over ℤ: `q` invariant factors, all equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaReport {
    pub p: u32,
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
    pub expected_rank: usize,
    pub prime_rank: usize,
    pub prime_invariant_factors: Vec<BigInt>,
}

impl ZetaReport {
    pub fn surjective(&self) -> bool {
        self.rank == self.expected_rank && self.invariant_factors.iter().all(One::is_one)
    }
}

pub fn verify_zeta_surjective(p: u32, capacity: u64) -> Result<ZetaReport, ReederError> {
    let data = Gl3Data::new(p, capacity)?;
    let z = zeta_maps(&data)?;
    let f = exactla::invariant_factors(&z.zeta);
    let fp = exactla::invariant_factors(&z.zeta_prime);
    Ok(ZetaReport {
        p,
        rank: f.len(),
        invariant_factors: f,
        expected_rank: data.st2.rank(),
        prime_rank: fp.len(),
        prime_invariant_factors: fp,
    })
}

/// One named identity of the closing calculation, with both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculationStep {
    pub name: String,
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
}

impl CalculationStep {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn step(name: &str, lhs: Vec<i64>, rhs: Vec<i64>) -> CalculationStep {
    CalculationStep {
        name: name.to_string(),
        lhs,
        rhs,
    }
}

fn lin(terms: &[(i64, &[i64])]) -> Vec<i64> {
    let len = terms.first().map_or(0, |t| t.1.len());
    let mut out = vec![0; len];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += c * x;
        }
    }
    out
}

/// Reproduces, for one `a ∈ GF(p)`, each equality of the computation of
/// `ζ⟦1 a 0; 0 1 0; 0 0 1⟧`, including the relation coming from
/// `[1 0 0 0; 0 1 1 0; 0 0 a 1]`.
pub fn apartment_calculation(
    data: &Gl3Data,
    z: &ZetaMaps,
    a: u32,
) -> Result<Vec<CalculationStep>, ReederError> {
    let k = data.field;
    let a = a as i64;
    let neg = |x: i64| -x;
    let st3 = &data.st3;
    let pi = |v: &[i64]| z.pi.mul_vec(v);
    let chain3 = |rows: &[Vec<i64>]| -> Result<Vec<i64>, ReederError> {
        let b = ApartmentInput::from_rows(k, rows)?;
        Ok(apartments::apartment_chain(st3, &b)?)
    };

    let ua = vec![vec![1, a, 0], vec![0, 1, 0], vec![0, 0, 1]];
    let ua_c = data.class(&ua)?;
    let a0 = data.class(&[vec![1, 0], vec![0, 1]])?;
    let aa = data.class(&[vec![1, a], vec![0, 1]])?;
    let mut steps = Vec::new();

    // ĥκ_m acting on the matrix.
    let m1 = vec![vec![0, 0, -1], vec![0, 1, 0], vec![1, a, 0]];
    let m2 = vec![vec![1, a, 0], vec![0, 0, -1], vec![0, 1, 0]];
    for (m, mat) in [(1, &m1), (2, &m2)] {
        let moved = st3.act_on_chain(&hat_kappa(m, k), &chain3(&ua)?);
        steps.push(step(
            &format!("hat_kappa_{m} applied to the class"),
            moved,
            chain3(mat)?,
        ));
    }
    let line1 = lin(&[
        (1, &pi(&data.class(&m1)?)),
        (-1, &pi(&data.class(&m2)?)),
        (1, &pi(&ua_c)),
    ]);
    steps.push(step(
        "zeta as alternating sum of pi",
        z.zeta.mul_vec(&ua_c),
        line1.clone(),
    ));

    // Column permutations.
    let p1 = vec![vec![-1, 0, 0], vec![0, 1, 0], vec![0, a, 1]];
    let p2 = vec![vec![1, 0, a], vec![0, -1, 0], vec![0, 0, 1]];
    steps.push(step(
        "first column permutation",
        chain3(&m1)?,
        chain3(&p1)?.into_iter().map(neg).collect(),
    ));
    steps.push(step(
        "second column permutation",
        chain3(&m2)?,
        chain3(&p2)?.into_iter().map(neg).collect(),
    ));

    // Column scaling.
    let la = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, a, 1]];
    let ya = vec![vec![1, 0, a], vec![0, 1, 0], vec![0, 0, 1]];
    steps.push(step("first column scaling", chain3(&p1)?, chain3(&la)?));
    steps.push(step("second column scaling", chain3(&p2)?, chain3(&ya)?));
    steps.push(step(
        "pi of the second term",
        pi(&data.class(&ya)?),
        a0.clone(),
    ));
    let line4 = lin(&[(-1, &pi(&data.class(&la)?)), (1, &a0), (1, &aa)]);
    steps.push(step("fourth line", line1, line4.clone()));

    if a == 0 {
        steps.push(step("zeta of U_0 is A_0", z.zeta.mul_vec(&ua_c), a0));
        return Ok(steps);
    }

    // The relation from the 3×4 matrix.
    let b = ApartmentInput::from_rows(k, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0], vec![0, 0, a, 1]])?;
    let rel = apartments::verify_relation(st3, &b)?;
    steps.push(step("relation is zero", rel, vec![0; st3.chamber_count()]));
    steps.push(step(
        "first relation term vanishes",
        chain3(&[vec![0, 0, 0], vec![1, 1, 0], vec![0, a, 1]])?,
        vec![0; st3.chamber_count()],
    ));
    let ainv = k.inv(k.reduce(a)).expect("a is nonzero") as i64;
    let wa = vec![vec![1, 0, 0], vec![0, 1, ainv], vec![0, 0, 1]];
    steps.push(step(
        "last relation term rescaled",
        chain3(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, a]])?,
        chain3(&wa)?,
    ));
    let id3 = data.class(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])?;
    steps.push(step(
        "L_a rewritten by the relation",
        data.class(&la)?,
        lin(&[(1, &id3), (-1, &data.class(&wa)?)]),
    ));
    steps.push(step(
        "zeta of U_a is A_0 + A_a",
        z.zeta.mul_vec(&ua_c),
        lin(&[(1, &a0), (1, &aa)]),
    ));
    Ok(steps)
}
