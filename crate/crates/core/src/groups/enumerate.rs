//! Enumerated matrix groups, subgroup filters and order cross-checks.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::exactla::PrimeField;

use super::fpmat::FpMat;
use super::kind::GroupKind;
use super::GroupError;

/// A finite group of matrices with stable integer ids. Id 0 is the identity.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: PrimeField,
    dim: usize,
    elements: Vec<FpMat>,
    index: HashMap<FpMat, usize>,
}

impl MatrixGroup {
    /// Closure of `gens` under multiplication. Fails once more than
    /// `capacity` elements have been found.
    pub fn generate(
        field: PrimeField,
        dim: usize,
        gens: &[FpMat],
        capacity: u64,
    ) -> Result<Self, GroupError> {
        let id = FpMat::identity(dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = elements[x].mul(s, field);
                if !index.contains_key(&y) {
                    if elements.len() as u64 >= capacity {
                        return Err(GroupError::Capacity {
                            estimated: elements.len() as u128 + 1,
                            capacity,
                        });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        Ok(MatrixGroup {
            field,
            dim,
            elements,
            index,
        })
    }

    /// Wraps an explicit element list, checking that it is a group.
    pub fn from_elements(
        field: PrimeField,
        dim: usize,
        elems: Vec<FpMat>,
    ) -> Result<Self, GroupError> {
        let id = FpMat::identity(dim);
        let mut elements = vec![id.clone()];
        elements.extend(elems.into_iter().filter(|g| *g != id));
        let index: HashMap<FpMat, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        if index.len() != elements.len() {
            return Err(GroupError::NotAGroup("duplicate elements".into()));
        }
        let g = MatrixGroup {
            field,
            dim,
            elements,
            index,
        };
        for a in &g.elements {
            let inv = a
                .inverse(field)
                .ok_or_else(|| GroupError::NotAGroup("singular element".into()))?;
            if !g.index.contains_key(&inv) {
                return Err(GroupError::NotAGroup("not closed under inverses".into()));
            }
        }
        for a in &g.elements {
            for b in &g.elements {
                if !g.index.contains_key(&a.mul(b, field)) {
                    return Err(GroupError::NotAGroup("not closed under products".into()));
                }
            }
        }
        Ok(g)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FpMat] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &FpMat {
        &self.elements[id]
    }

    pub fn id_of(&self, g: &FpMat) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &FpMat) -> bool {
        self.index.contains_key(g)
    }

    pub fn mul_ids(&self, a: usize, b: usize) -> usize {
        self.id_of(&self.elements[a].mul(&self.elements[b], self.field))
            .expect("closed under products")
    }

    pub fn inv_id(&self, a: usize) -> usize {
        self.id_of(&self.elements[a].inverse(self.field).expect("invertible"))
            .expect("closed under inverses")
    }

    /// Full multiplication table, `table[a * order + b] = id(a·b)`.
    pub fn multiplication_table(&self) -> Vec<u32> {
        let n = self.order();
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.mul_ids(a, b) as u32;
            }
        }
        t
    }

    /// Subgroup generated by the elements with the given ids.
    pub fn closure_of(&self, ids: &[usize]) -> HashSet<usize> {
        let mut seen = HashSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in ids {
                let y = self.mul_ids(x, s);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// A generating set chosen greedily: scan `members` in order and keep
    /// each element not already in the subgroup generated so far.
    pub fn generating_set(&self, members: &[usize]) -> Vec<usize> {
        let target: HashSet<usize> = members.iter().copied().collect();
        let mut gens = Vec::new();
        let mut current = HashSet::from([0usize]);
        for &x in members {
            if current.len() == target.len() {
                break;
            }
            if !current.contains(&x) {
                gens.push(x);
                current = self.closure_of(&gens);
            }
        }
        gens
    }

    /// The subgroup on `members` as a group of its own (ids renumbered).
    pub fn subgroup(&self, members: &[usize]) -> MatrixGroup {
        let id = FpMat::identity(self.dim);
        let mut elements = vec![id.clone()];
        elements.extend(
            members
                .iter()
                .map(|&i| self.elements[i].clone())
                .filter(|g| *g != id),
        );
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        MatrixGroup {
            field: self.field,
            dim: self.dim,
            elements,
            index,
        }
    }
}

/// An enumerated classical group.
#[derive(Clone, Debug)]
pub struct ClassicalGroup {
    pub kind: GroupKind,
    pub group: MatrixGroup,
}

impl ClassicalGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn elements(&self) -> &[FpMat] {
        self.group.elements()
    }

    /// Ids of the members of a distinguished subgroup.
    pub fn subgroup_members(&self, filter: SubgroupFilter) -> Result<Vec<usize>, GroupError> {
        filter.check(&self.kind)?;
        Ok((0..self.order())
            .filter(|&i| filter.admits(&self.kind, self.group.element(i)))
            .collect())
    }
}

/// Enumerates `𝔾_n(GF(p))` by closure from generators and checks the count
/// against the order formula.
pub fn build_group(kind: GroupKind, capacity: u64) -> Result<ClassicalGroup, GroupError> {
    let expected = kind.order_formula();
    if expected > capacity as u128 {
        return Err(GroupError::Capacity {
            estimated: expected,
            capacity,
        });
    }
    let group = MatrixGroup::generate(kind.field, kind.m(), &kind.generators(), capacity)?;
    if group.order() as u128 != expected {
        return Err(GroupError::IncompleteGenerators {
            group: kind.to_string(),
            expected,
            found: group.order(),
        });
    }
    Ok(ClassicalGroup { kind, group })
}

/// The distinguished subgroups `P_n^ℓ`, `U_n^ℓ`, `L_n^ℓ`, `Stab_n^ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupFilter {
    Parabolic(usize),
    Unipotent(usize),
    Levi(usize),
    Stab(usize),
}

impl SubgroupFilter {
    pub fn level(self) -> usize {
        match self {
            SubgroupFilter::Parabolic(l)
            | SubgroupFilter::Unipotent(l)
            | SubgroupFilter::Levi(l)
            | SubgroupFilter::Stab(l) => l,
        }
    }

    pub fn check(self, kind: &GroupKind) -> Result<(), GroupError> {
        let l = self.level();
        if l == 0 || l > kind.n {
            return Err(GroupError::LevelOutOfRange {
                level: l,
                n: kind.n,
            });
        }
        Ok(())
    }

    /// Membership predicate for an element of `kind`.
    pub fn admits(self, kind: &GroupKind, g: &FpMat) -> bool {
        let l = self.level();
        let form = kind.form();
        let m = kind.m();
        let a_span: Vec<usize> = (1..=l).map(|j| form.a(j)).collect();
        let in_a = |i: usize| i < l;
        // Column j lies in ⟨a_1..a_ℓ⟩.
        let col_in_a = |j: usize| (0..m).all(|i| in_a(i) || g.get(i, j) == 0);
        let stabilizes_a = || a_span.iter().all(|&j| col_in_a(j));
        match self {
            SubgroupFilter::Parabolic(_) => stabilizes_a(),
            SubgroupFilter::Stab(_) => a_span
                .iter()
                .all(|&j| (0..m).all(|i| g.get(i, j) == u8::from(i == j))),
            SubgroupFilter::Unipotent(_) => {
                let fixes_a = a_span
                    .iter()
                    .all(|&j| (0..m).all(|i| g.get(i, j) == u8::from(i == j)));
                // Identity on V/A (linear) or on A^⊥/A (formed).
                let rest = kind.complement_positions(l);
                fixes_a
                    && rest
                        .iter()
                        .all(|&j| (0..m).all(|i| in_a(i) || g.get(i, j) == u8::from(i == j)))
            }
            SubgroupFilter::Levi(_) => {
                if !stabilizes_a() {
                    return false;
                }
                if kind.family.has_form() {
                    // Stabilizes ⟨b_1..b_ℓ⟩.
                    let bpos: Vec<usize> = (1..=l).map(|j| form.b(j)).collect();
                    bpos.iter()
                        .all(|&j| (0..m).all(|i| bpos.contains(&i) || g.get(i, j) == 0))
                } else {
                    // Stabilizes ⟨a_{ℓ+1}..a_n⟩.
                    (l..m).all(|j| (0..l).all(|i| g.get(i, j) == 0))
                }
            }
        }
    }
}

/// Number of `m × m` matrices over GF(p) in `kind`, by testing every matrix.
/// Only attempted when `p^{m²} ≤ 2^20`.
pub fn exhaustive_order(kind: &GroupKind) -> Option<u64> {
    let m = kind.m();
    let p = kind.p() as u64;
    let total = p.checked_pow((m * m) as u32)?;
    if total > 1 << 20 {
        return None;
    }
    let mut count = 0;
    let mut entries = vec![0i64; m * m];
    for idx in 0..total {
        let mut x = idx;
        for e in entries.iter_mut() {
            *e = (x % p) as i64;
            x /= p;
        }
        let rows: Vec<Vec<i64>> = entries.chunks(m.max(1)).map(<[i64]>::to_vec).collect();
        let g = if m == 0 {
            FpMat::identity(0)
        } else {
            FpMat::from_rows(kind.field, &rows)
        };
        if kind.contains(&g) {
            count += 1;
        }
    }
    Some(count)
}
