//! `H_i(1 × 𝔾_{n−ℓ}; St_{GL_ℓ} ⊗ St_{𝔾_{n−ℓ}}) ≅ H_i(Stab_n^ℓ; St_{𝔾_n})`.
//!
//! Both sides are computed independently. At `i = 0` the explicit maps are
//! also checked: the product map `f` (with the inclusion
//! `1 × 𝔾_{n−ℓ} ⊂ Stab_n^ℓ`) and the Reeder projection `g` (with the
//! projection `Stab_n^ℓ → 𝔾_{n−ℓ}`) must preserve the relation lattices and
//! be mutually inverse modulo them.

use std::sync::Arc;

use crate::building::HomologyGroup;
use crate::exactla::{snf, IMatrix, Ring};
use crate::groups::{build_group, GroupKind, SubgroupFilter};
use crate::reeder::ReederModules;

use super::{bar_homology, GModule, HomologyError};

/// Checks on the explicit `i = 0` maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapiroMaps {
    /// `f(R_Levi) ⊂ R_Stab`.
    pub forward_well_defined: bool,
    /// `g(R_Stab) ⊂ R_Levi`.
    pub backward_well_defined: bool,
    /// `g ∘ f = id` on the nose.
    pub left_inverse: bool,
    /// `f ∘ g − id` lands in `R_Stab`.
    pub right_inverse: bool,
}

impl ShapiroMaps {
    pub fn holds(&self) -> bool {
        self.forward_well_defined
            && self.backward_well_defined
            && self.left_inverse
            && self.right_inverse
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapiroReport {
    pub kind: GroupKind,
    pub l: usize,
    pub i: usize,
    pub levi_order: usize,
    pub stab_order: usize,
    pub levi_side: HomologyGroup,
    pub stab_side: HomologyGroup,
    pub maps: Option<ShapiroMaps>,
}

impl ShapiroReport {
    pub fn holds(&self) -> bool {
        self.levi_side == self.stab_side && self.maps.as_ref().map_or(true, ShapiroMaps::holds)
    }
}

fn homology(m: &GModule, i: usize, capacity: u64) -> Result<HomologyGroup, HomologyError> {
    if i == 0 {
        Ok(m.coinvariants(Ring::Integers))
    } else {
        bar_homology(m, i, Ring::Integers, capacity)
    }
}

pub fn shapiro_check(
    kind: GroupKind,
    l: usize,
    i: usize,
    capacity: u64,
) -> Result<ShapiroReport, HomologyError> {
    let mods = ReederModules::new(kind, l, capacity)?;
    let decomposition = mods.decomposition(l)?;
    let big = Arc::new(mods.big);
    let (r1, r2) = (mods.gl.rank(), mods.sub.rank());

    let sub_kind = kind.with_rank(kind.n - l);
    let sub_group = Arc::new(build_group(sub_kind, capacity)?.group);
    let sub_st = Arc::new(mods.sub);
    let levi = {
        let st = sub_st.clone();
        GModule::new(
            sub_group.clone(),
            r1 * r2,
            sub_kind.generators(),
            Arc::new(move |h| IMatrix::identity(r1).kron(&st.action(h))),
        )
    };

    let group = build_group(kind, capacity)?;
    let members = group.subgroup_members(SubgroupFilter::Stab(l))?;
    let whole = GModule::steinberg(Arc::new(group.group), kind.generators(), big.clone());
    let stab = whole.restrict(&members);

    let levi_side = homology(&levi, i, capacity)?;
    let stab_side = homology(&stab, i, capacity)?;

    let maps = (i == 0).then(|| {
        let f = &decomposition.product.matrix;
        let g = decomposition.projection_matrix();
        let r_levi = levi.relations();
        let r_stab = stab.relations();
        let w = r1 * r2;
        ShapiroMaps {
            forward_well_defined: snf::span_contains_dense(&r_stab, &f.mul(&r_levi)),
            backward_well_defined: snf::span_contains_dense(&r_levi, &g.mul(&r_stab)),
            left_inverse: g.mul(f) == IMatrix::identity(w),
            right_inverse: snf::span_contains_dense(
                &r_stab,
                &f.mul(&g).sub(&IMatrix::identity(big.rank())),
            ),
        }
    });

    Ok(ShapiroReport {
        kind,
        l,
        i,
        levi_order: sub_group.order(),
        stab_order: stab.group().order(),
        levi_side,
        stab_side,
        maps,
    })
}
