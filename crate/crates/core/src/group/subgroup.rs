use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{same_group, FiniteGroup, GroupHom, Structure};
use crate::error::{Error, Result};
use crate::mask::Mask;

/// A subgroup of a parent [`FiniteGroup`], stored as a membership mask.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Mask,
    size: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_group(&self.parent, &other.parent)
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(|{}| in {}: ", self.size, self.parent.label())?;
        if self.size <= 16 {
            write!(f, "{:?})", self.members)
        } else {
            write!(f, "…)")
        }
    }
}

/// Normality data for a subgroup.
#[derive(Clone, Debug)]
pub struct NormalityReport {
    pub is_normal: bool,
    pub normal_closure: Subgroup,
    pub core: Subgroup,
}

/// Result of combining two subgroups of the same parent.
#[derive(Clone, Debug)]
pub struct ProductReport {
    pub intersection: Subgroup,
    pub product_set: Mask,
    pub product_is_subgroup: bool,
    pub product_covers_group: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupSummary {
    pub size: usize,
    pub index: usize,
    pub elements: Option<Vec<usize>>,
}

impl Subgroup {
    pub(crate) fn from_mask_unchecked(parent: &Arc<FiniteGroup>, members: Mask) -> Self {
        let size = members.count();
        Self {
            parent: parent.clone(),
            members,
            size,
        }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::from_mask_unchecked(parent, Mask::from_iter(parent.order(), [0]))
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self::from_mask_unchecked(parent, Mask::full(parent.order()))
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(parent: &Arc<FiniteGroup>, gens: impl IntoIterator<Item = usize>) -> Self {
        Self::from_mask_unchecked(parent, parent.closure_mask(gens))
    }

    /// Accepts an explicit element set, checking the subgroup axioms.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        let n = parent.order();
        if elements.iter().any(|&x| x >= n) {
            return Err(Error::NotSubgroup);
        }
        Self::from_mask(parent, Mask::from_iter(n, elements.iter().copied()))
    }

    pub fn from_mask(parent: &Arc<FiniteGroup>, members: Mask) -> Result<Self> {
        if members.len() != parent.order() || !members.contains(0) {
            return Err(Error::NotSubgroup);
        }
        for a in members.iter() {
            if !members.contains(parent.inv(a)) {
                return Err(Error::NotSubgroup);
            }
            for b in members.iter() {
                if !members.contains(parent.mul(a, b)) {
                    return Err(Error::NotSubgroup);
                }
            }
        }
        Ok(Self::from_mask_unchecked(parent, members))
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &Mask {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.size
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn is_whole(&self) -> bool {
        self.size == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    fn check_parent(&self, other: &Subgroup) -> Result<()> {
        if same_group(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::DifferentParents)
        }
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        Ok(Self::from_mask_unchecked(
            &self.parent,
            self.members.and(&other.members),
        ))
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        let gens = self.generators().into_iter().chain(other.generators());
        Ok(Self::generated(&self.parent, gens))
    }

    /// The element set `{ab : a ∈ self, b ∈ other}`.
    pub fn product_set(&self, other: &Subgroup) -> Result<Mask> {
        self.check_parent(other)?;
        let mut out = Mask::empty(self.parent.order());
        for a in self.members.iter() {
            for b in other.members.iter() {
                out.insert(self.parent.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn algebra(&self, other: &Subgroup) -> Result<ProductReport> {
        let intersection = self.intersection(other)?;
        let product_set = self.product_set(other)?;
        let closure = self.parent.closure_mask(product_set.iter());
        Ok(ProductReport {
            product_is_subgroup: closure == product_set,
            product_covers_group: product_set.count() == self.parent.order(),
            intersection,
            product_set,
        })
    }

    /// A generating set, chosen greedily in increasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = Mask::from_iter(self.parent.order(), [0]);
        for x in self.members.iter() {
            if !covered.contains(x) {
                gens.push(x);
                covered = self.parent.closure_mask(gens.iter().copied());
                if covered.count() == self.size {
                    break;
                }
            }
        }
        gens
    }

    /// `g S g⁻¹`
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let m = Mask::from_iter(
            self.parent.order(),
            self.members.iter().map(|s| self.parent.conj(g, s)),
        );
        Self::from_mask_unchecked(&self.parent, m)
    }

    pub fn is_normal(&self) -> bool {
        let gens = self.generators();
        self.parent.generators().iter().all(|&g| {
            gens.iter()
                .all(|&s| self.members.contains(self.parent.conj(g, s)))
        })
    }

    pub fn normal_closure(&self) -> Subgroup {
        let g = &self.parent;
        let mut current = self.clone();
        loop {
            let gens = current.generators();
            let fresh: Vec<usize> = g
                .generators()
                .iter()
                .flat_map(|&x| gens.iter().map(move |&s| g.conj(x, s)))
                .filter(|&c| !current.contains(c))
                .collect();
            if fresh.is_empty() {
                return current;
            }
            current = Self::generated(g, gens.into_iter().chain(fresh));
        }
    }

    /// Largest normal subgroup of the parent inside `self`.
    pub fn core(&self) -> Subgroup {
        let mut members = self.members.clone();
        for g in self.parent.elements() {
            members = members.and(&self.conjugate(g).members);
        }
        Self::from_mask_unchecked(&self.parent, members)
    }

    pub fn normality(&self) -> NormalityReport {
        NormalityReport {
            is_normal: self.is_normal(),
            normal_closure: self.normal_closure(),
            core: self.core(),
        }
    }

    /// `f(S) = S` as sets.
    pub fn is_invariant_setwise(&self, f: &GroupHom) -> bool {
        let mut image = Mask::empty(self.parent.order());
        for s in self.members.iter() {
            let y = f.apply(s);
            if !self.members.contains(y) {
                return false;
            }
            image.insert(y);
        }
        image == self.members
    }

    /// `f(S) ≤ S`.
    pub fn is_invariant_under(&self, f: &GroupHom) -> bool {
        self.members
            .iter()
            .all(|s| self.members.contains(f.apply(s)))
    }

    /// Relabels the subgroup as a group in its own right, returning it with
    /// the inclusion map into the parent.
    pub fn as_group(&self) -> (Arc<FiniteGroup>, GroupHom) {
        let elems = self.elements();
        let mut local = vec![u32::MAX; self.parent.order()];
        for (i, &x) in elems.iter().enumerate() {
            local[x] = i as u32;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * n + j] = local[self.parent.mul(a, b)];
            }
        }
        let gens = self
            .generators()
            .into_iter()
            .map(|x| local[x] as usize)
            .collect();
        let group = FiniteGroup::from_trusted(
            n,
            table,
            format!("sub({}, {n})", self.parent.label()),
            Some(gens),
            Structure::Table,
        );
        let inclusion = GroupHom::new_unchecked(
            &group,
            &self.parent,
            elems.iter().map(|&x| x as u32).collect(),
        );
        (group, inclusion)
    }

    /// Quotient by a normal subgroup, with the projection map.
    pub fn quotient(&self) -> Result<(Arc<FiniteGroup>, GroupHom)> {
        if !self.is_normal() {
            return Err(Error::NotNormal);
        }
        let g = &self.parent;
        let n = g.order();
        let mut coset = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset[x] == u32::MAX {
                let c = reps.len() as u32;
                reps.push(x);
                for s in self.members.iter() {
                    coset[g.mul(x, s)] = c;
                }
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = coset[g.mul(a, b)];
            }
        }
        let mut gens: Vec<usize> = g.generators().iter().map(|&x| coset[x] as usize).collect();
        gens.sort_unstable();
        gens.dedup();
        let quotient = FiniteGroup::from_trusted(
            q,
            table,
            format!("{}/{}", g.label(), self.size),
            Some(gens),
            Structure::Quotient { reps },
        );
        let projection = GroupHom::new_unchecked(g, &quotient, coset);
        Ok((quotient, projection))
    }

    pub fn summary(&self, with_elements: bool) -> SubgroupSummary {
        SubgroupSummary {
            size: self.size,
            index: self.index(),
            elements: with_elements.then(|| self.elements()),
        }
    }
}
