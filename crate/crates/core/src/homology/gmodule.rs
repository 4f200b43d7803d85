//! Modules over enumerated finite matrix groups.

use std::fmt;
use std::sync::Arc;

use crate::building::{HomologyGroup, SteinbergModule};
use crate::exactla::{self, IMatrix, Ring};
use crate::groups::{FpMat, MatrixGroup};

use super::HomologyError;

/// Action of a group element on a free module of fixed rank.
pub type Action = Arc<dyn Fn(&FpMat) -> IMatrix + Send + Sync>;

/// A free `ℤ`-module of finite rank with an action of an enumerated group.
/// Generators are kept explicitly; relation modules and coinvariants only
/// use them.
#[derive(Clone)]
pub struct GModule {
    group: Arc<MatrixGroup>,
    rank: usize,
    generators: Vec<FpMat>,
    action: Action,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GModule")
            .field("order", &self.group.order())
            .field("rank", &self.rank)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl GModule {
    pub fn new(
        group: Arc<MatrixGroup>,
        rank: usize,
        generators: Vec<FpMat>,
        action: Action,
    ) -> Self {
        GModule {
            group,
            rank,
            generators,
            action,
        }
    }

    /// Generators chosen greedily from the element list.
    pub fn with_greedy_generators(group: Arc<MatrixGroup>, rank: usize, action: Action) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        let generators = group
            .generating_set(&all)
            .into_iter()
            .map(|i| group.element(i).clone())
            .collect();
        GModule::new(group, rank, generators, action)
    }

    /// `R^rank` with trivial action.
    pub fn trivial(group: Arc<MatrixGroup>, rank: usize) -> Self {
        GModule::with_greedy_generators(group, rank, Arc::new(move |_| IMatrix::identity(rank)))
    }

    /// The Steinberg module restricted to `group`, which must act on the
    /// same space.
    pub fn steinberg(
        group: Arc<MatrixGroup>,
        generators: Vec<FpMat>,
        st: Arc<SteinbergModule>,
    ) -> Self {
        let rank = st.rank();
        GModule::new(group, rank, generators, Arc::new(move |g| st.action(g)))
    }

    /// A module given by one matrix per element id, checked to be a
    /// homomorphism on every pair.
    pub fn from_table(group: Arc<MatrixGroup>, table: Vec<IMatrix>) -> Result<Self, HomologyError> {
        if table.len() != group.order() {
            return Err(HomologyError::Malformed(format!(
                "{} matrices for a group of order {}",
                table.len(),
                group.order()
            )));
        }
        let rank = table.first().map_or(0, IMatrix::rows);
        let table = Arc::new(table);
        let lookup = {
            let group = group.clone();
            let table = table.clone();
            Arc::new(move |g: &FpMat| table[group.id_of(g).expect("element of the group")].clone())
        };
        let m = GModule::with_greedy_generators(group, rank, lookup);
        let n = m.group.order();
        for a in 0..n {
            for b in 0..n {
                if table[m.group.mul_ids(a, b)] != table[a].mul(&table[b]) {
                    return Err(HomologyError::NotAHomomorphism(format!(
                        "elements {a} and {b}"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn group(&self) -> &Arc<MatrixGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FpMat] {
        &self.generators
    }

    pub fn matrix(&self, g: &FpMat) -> IMatrix {
        (self.action)(g)
    }

    pub fn matrix_of_id(&self, id: usize) -> IMatrix {
        (self.action)(self.group.element(id))
    }

    /// `ρ(1) = I` and `ρ(g)ρ(h) = ρ(gh)` on the given id pairs.
    pub fn check_homomorphism(&self, pairs: &[(usize, usize)]) -> bool {
        if self.matrix_of_id(0) != IMatrix::identity(self.rank) {
            return false;
        }
        pairs.iter().all(|&(a, b)| {
            self.matrix_of_id(self.group.mul_ids(a, b))
                == self.matrix_of_id(a).mul(&self.matrix_of_id(b))
        })
    }

    /// The restriction to the subgroup on `members` (ids in this group).
    pub fn restrict(&self, members: &[usize]) -> GModule {
        let generators = self
            .group
            .generating_set(members)
            .into_iter()
            .map(|i| self.group.element(i).clone())
            .collect();
        let sub = Arc::new(self.group.subgroup(members));
        GModule::new(sub, self.rank, generators, self.action.clone())
    }

    /// Columns spanning `{ρ(s)x − x}` over the generators.
    pub fn relations(&self) -> IMatrix {
        relation_matrix(self.rank, self.generators.iter().map(|g| self.matrix(g)))
    }

    /// Columns spanning `{ρ(g)x − x}` over every element.
    pub fn relations_all(&self) -> IMatrix {
        relation_matrix(
            self.rank,
            self.group.elements().iter().map(|g| self.matrix(g)),
        )
    }

    /// `M_G = M / ⟨ρ(g)x − x⟩` over `ring`.
    pub fn coinvariants(&self, ring: Ring) -> HomologyGroup {
        quotient(self.rank, &self.relations(), ring)
    }

    /// `Ind_H^G M` for `H` this module's group and `G = big ⊇ H`: the
    /// direct sum over left coset representatives `t_i`, with `x·t_i =
    /// t_j·h` acting by `ρ(h)` from block `i` to block `j`.
    pub fn induce(
        &self,
        big: Arc<MatrixGroup>,
        generators: Vec<FpMat>,
    ) -> Result<GModule, HomologyError> {
        let k = big.field();
        let mut coset_of = vec![usize::MAX; big.order()];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..big.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for h in self.group.elements() {
                let id = big
                    .id_of(h)
                    .ok_or_else(|| HomologyError::Malformed("not a subgroup".into()))?;
                coset_of[big.mul_ids(g, id)] = c;
            }
        }
        if reps.len() * self.group.order() != big.order() {
            return Err(HomologyError::Malformed(
                "cosets do not partition the group".into(),
            ));
        }
        let rep_inv: Vec<FpMat> = reps
            .iter()
            .map(|&r| big.element(r).inverse(k).expect("invertible"))
            .collect();
        let r = self.rank;
        let width = reps.len() * r;
        let inner = self.action.clone();
        let bigc = big.clone();
        let reps_c = reps.clone();
        let action: Action = Arc::new(move |x: &FpMat| {
            let mut out = IMatrix::zeros(width, width);
            for (i, &ri) in reps_c.iter().enumerate() {
                let xr = x.mul(bigc.element(ri), k);
                let j = coset_of[bigc.id_of(&xr).expect("element of the group")];
                let h = rep_inv[j].mul(&xr, k);
                let block = inner(&h);
                for a in 0..r {
                    for b in 0..r {
                        out[(j * r + a, i * r + b)] = block[(a, b)];
                    }
                }
            }
            out
        });
        Ok(GModule::new(big, width, generators, action))
    }
}

/// `[ρ_1 − I | ρ_2 − I | …]`.
pub fn relation_matrix(rank: usize, mats: impl Iterator<Item = IMatrix>) -> IMatrix {
    let id = IMatrix::identity(rank);
    let blocks: Vec<IMatrix> = mats.map(|m| m.sub(&id)).collect();
    IMatrix::hstack_all(rank, &blocks)
}

/// `R^rank / span(relations)` over `ring`.
pub fn quotient(rank: usize, relations: &IMatrix, ring: Ring) -> HomologyGroup {
    match ring {
        Ring::Integers => {
            let f = exactla::invariant_factors(relations);
            HomologyGroup {
                rank: rank - f.len(),
                torsion: f
                    .into_iter()
                    .filter(|x| !num_traits::One::is_one(x))
                    .collect(),
            }
        }
        _ => HomologyGroup {
            rank: rank - exactla::rank_over(ring, relations),
            torsion: Vec::new(),
        },
    }
}
