//! First page of the spectral sequence for `𝔾_n` acting on the complex of
//! partial bases with coefficients in `St_{𝔾_n}`.
//!
//! For `p < n − 1` the `p`-cells form one orbit with representative
//! `σ_p = (a_1, …, a_{p+1})` and stabilizer `Stab_n^{p+1}`, so
//! `E¹_{p,q} = H_q(Stab_n^{p+1}; St)`. On the bottom row `E¹_{p,0} = St / R_{p+1}`
//! and `d¹ = Σ_i (−1)^i ρ(g_i)`, where `g_i` carries the `i`-th face of `σ_p`
//! to `σ_{p−1}` (see [`GroupKind::transporter`]).

use std::sync::Arc;

use crate::building::{HomologyGroup, SteinbergModule};
use crate::exactla::{snf, IMatrix, Ring};
use crate::groups::{build_group, hat_kappa, Family, GroupKind, SubgroupFilter};
use crate::reeder::{pi_map, reeder_product, stabilization_map, Gl3Data, ReederModules};

use super::{bar_homology, GModule, HomologyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Entry {
    pub p: usize,
    pub q: usize,
    pub stabilizer_order: usize,
    /// `None` when the bar complex exceeds capacity.
    pub group: Option<HomologyGroup>,
}

#[derive(Clone, Debug)]
pub struct E1Page {
    pub kind: GroupKind,
    pub entries: Vec<E1Entry>,
    /// Relation lattice `R_{p+1} ⊂ St` of the bottom-row entry `p`.
    pub relations: Vec<IMatrix>,
    /// Lift `St → St` of `d¹ : E¹_{p,0} → E¹_{p−1,0}`, for `p ≥ 1` (index `p − 1`).
    pub differentials: Vec<IMatrix>,
    /// `d¹(R_{p+1}) ⊂ R_p`, for each stored differential.
    pub well_defined: Vec<bool>,
    /// `d¹ ∘ d¹` lands in `R_{p−1}`, for `p ≥ 2` (index `p − 2`).
    pub squares_vanish: Vec<bool>,
}

impl E1Page {
    pub fn entry(&self, p: usize, q: usize) -> Option<&E1Entry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    pub fn holds(&self) -> bool {
        self.well_defined.iter().all(|&b| b) && self.squares_vanish.iter().all(|&b| b)
    }
}

/// The rows `q ≤ q_max` for `0 ≤ p ≤ p_max` (`p_max < n − 1`, or `≤ n − 1`
/// outside `SL`, where the top cells still form one orbit).
pub fn e1_page(
    kind: GroupKind,
    q_max: usize,
    p_max: usize,
    capacity: u64,
) -> Result<E1Page, HomologyError> {
    let limit = if kind.family == Family::SL {
        kind.n.saturating_sub(2)
    } else {
        kind.n.saturating_sub(1)
    };
    if kind.n == 0 || p_max > limit {
        return Err(HomologyError::Malformed(format!(
            "{kind}: p ≤ {p_max} outside the transitive range"
        )));
    }
    let st = Arc::new(SteinbergModule::new(kind, capacity)?);
    let group = build_group(kind, capacity)?;
    let whole = GModule::steinberg(Arc::new(group.group.clone()), kind.generators(), st.clone());

    let mut entries = Vec::new();
    let mut relations = Vec::new();
    for p in 0..=p_max {
        let members = group.subgroup_members(SubgroupFilter::Stab(p + 1))?;
        let stab = whole.restrict(&members);
        for q in 0..=q_max {
            let h = if q == 0 {
                Some(stab.coinvariants(Ring::Integers))
            } else {
                match bar_homology(&stab, q, Ring::Integers, capacity) {
                    Ok(h) => Some(h),
                    Err(HomologyError::Capacity { .. }) => None,
                    Err(e) => return Err(e),
                }
            };
            entries.push(E1Entry {
                p,
                q,
                stabilizer_order: stab.group().order(),
                group: h,
            });
        }
        relations.push(stab.relations());
    }

    let differentials: Vec<IMatrix> = (1..=p_max)
        .map(|p| {
            let mut d = IMatrix::zeros(st.rank(), st.rank());
            for i in 0..=p {
                let a = st.action(&kind.transporter(p, i));
                d = if i % 2 == 0 { d.add(&a) } else { d.sub(&a) };
            }
            d
        })
        .collect();
    let well_defined = (1..=p_max)
        .map(|p| {
            snf::span_contains_dense(&relations[p - 1], &differentials[p - 1].mul(&relations[p]))
        })
        .collect();
    let squares_vanish = (2..=p_max)
        .map(|p| {
            snf::span_contains_dense(
                &relations[p - 2],
                &differentials[p - 2].mul(&differentials[p - 1]),
            )
        })
        .collect();
    Ok(E1Page {
        kind,
        entries,
        relations,
        differentials,
        well_defined,
        squares_vanish,
    })
}

/// One `∂_m`, compared through the stabilizer groups and through the
/// tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTerm {
    pub m: usize,
    pub module_equal: bool,
    pub coinvariant_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub n: usize,
    pub p: u32,
    pub terms: Vec<FactorTerm>,
    /// `ζ ⊗ stab` carries the source relations into the target relations.
    pub well_defined: bool,
    /// `∂_1 − ∂_2 + ∂_3 ≡ ζ ⊗ stab` modulo the target relations.
    pub zeta_consistent: bool,
    /// Whether the face transporters give the same map on coinvariants as
    /// the `κ_m`.
    pub transporters_agree: bool,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.well_defined
            && self.zeta_consistent
            && self
                .terms
                .iter()
                .all(|t| t.module_equal && t.coinvariant_equal)
    }
}

/// Relations of `𝔾_k` acting on `St_{GL_j} ⊗ St_{𝔾_k}` through the second
/// factor.
fn tensor_relations(outer: usize, kind: GroupKind, st: &SteinbergModule) -> IMatrix {
    let r = outer * st.rank();
    let id = IMatrix::identity(r);
    let blocks: Vec<IMatrix> = kind
        .generators()
        .iter()
        .map(|h| IMatrix::identity(outer).kron(&st.action(h)).sub(&id))
        .collect();
    IMatrix::hstack_all(r, &blocks)
}

/// For `GL_n` over GF(p), `n ≥ 3`: `Ψ_m = proj^{(2)} ∘ ρ(κ_m) ∘ prod^{(3)}`
/// against `Φ_m = ζ_m ⊗ stab`, where `stab : St_{GL_{n−3}} → St_{GL_{n−2}}`.
pub fn factorization_check(
    n: usize,
    p: u32,
    capacity: u64,
) -> Result<FactorizationReport, HomologyError> {
    if n < 3 {
        return Err(crate::groups::GroupError::RankTooSmall { n, needed: 3 }.into());
    }
    let kind = GroupKind::new(Family::GL, n, p)?;
    let three = ReederModules::new(kind, 3, capacity)?;
    let prod3 = reeder_product(&three.big, &three.gl, &three.sub, 3)?;
    let two = ReederModules::new(kind, 2, capacity)?;
    let proj2 = two.decomposition(2)?.projection_matrix();
    let gl3 = Gl3Data::new(p, capacity)?;
    let pi = pi_map(&gl3)?;
    let stab = stabilization_map(kind.with_rank(n - 2), capacity)?;

    let r_src = tensor_relations(three.gl.rank(), kind.with_rank(n - 3), &three.sub);
    let r_tgt = tensor_relations(two.gl.rank(), kind.with_rank(n - 2), &two.sub);

    let mut terms = Vec::new();
    let mut psi_sum: Option<IMatrix> = None;
    let mut phi_sum: Option<IMatrix> = None;
    for m in 1..=3 {
        let psi = proj2
            .mul(&three.big.action(&kind.kappa(m)?))
            .mul(&prod3.matrix);
        let zeta_m = pi.mul(&gl3.st3.action(&hat_kappa(m, kind.field)));
        let phi = zeta_m.kron(&stab);
        let sign = if m == 2 { -1 } else { 1 };
        let acc = |s: Option<IMatrix>, x: &IMatrix| {
            let x = x.scale(&sign);
            Some(s.map_or(x.clone(), |s| s.add(&x)))
        };
        psi_sum = acc(psi_sum, &psi);
        phi_sum = acc(phi_sum, &phi);
        terms.push(FactorTerm {
            m,
            module_equal: psi == phi,
            coinvariant_equal: snf::span_contains_dense(&r_tgt, &psi.sub(&phi)),
        });
    }
    let psi_sum = psi_sum.expect("three terms");
    let phi_sum = phi_sum.expect("three terms");

    // The same component of d¹ built from the face transporters.
    let mut brown = IMatrix::zeros(two.big.rank(), two.big.rank());
    for i in 0..=2 {
        let a = two.big.action(&kind.transporter(2, i));
        brown = if i % 2 == 0 {
            brown.add(&a)
        } else {
            brown.sub(&a)
        };
    }
    let brown = proj2.mul(&brown).mul(&prod3.matrix);

    Ok(FactorizationReport {
        n,
        p,
        well_defined: snf::span_contains_dense(&r_tgt, &phi_sum.mul(&r_src)),
        zeta_consistent: snf::span_contains_dense(&r_tgt, &psi_sum.sub(&phi_sum)),
        transporters_agree: snf::span_contains_dense(&r_tgt, &brown.sub(&psi_sum)),
        terms,
    })
}
