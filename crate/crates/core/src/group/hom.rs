use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use super::{same_group, FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::mask::Mask;

/// A homomorphism stored as a total element map.
#[derive(Clone)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<u32>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same_group(&self.domain, &other.domain)
            && same_group(&self.codomain, &other.codomain)
    }
}

impl Eq for GroupHom {}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}",
            self.domain.label(),
            self.codomain.label()
        )?;
        if self.map.len() <= 16 {
            write!(f, ": {:?})", self.map)
        } else {
            write!(f, ")")
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomParts {
    pub kernel: Subgroup,
    pub image: Subgroup,
    pub is_injective: bool,
    pub is_surjective: bool,
}

impl GroupHom {
    /// Validates `map` as a homomorphism: identity is preserved and
    /// `f(x s) = f(x) f(s)` for every element `x` and generator `s`, which
    /// forces `f(xy) = f(x) f(y)` by induction on `y`.
    pub fn new(
        domain: &Arc<FiniteGroup>,
        codomain: &Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != domain.order() || map.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::Unsupported("element map has the wrong shape".into()));
        }
        let hom = Self::new_unchecked(
            domain,
            codomain,
            map.into_iter().map(|y| y as u32).collect(),
        );
        if let Some((x, y)) = hom.violation() {
            return Err(Error::NotAHomomorphism { x, y });
        }
        Ok(hom)
    }

    pub(crate) fn new_unchecked(
        domain: &Arc<FiniteGroup>,
        codomain: &Arc<FiniteGroup>,
        map: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(map.len(), domain.order());
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map,
        }
    }

    /// First pair `(x, y)` with `f(xy) != f(x) f(y)`, scanning generator edges.
    fn violation(&self) -> Option<(usize, usize)> {
        if self.map[0] != 0 {
            return Some((0, 0));
        }
        let (d, c) = (&self.domain, &self.codomain);
        for x in d.elements() {
            for &s in d.generators() {
                if self.apply(d.mul(x, s)) != c.mul(self.apply(x), self.apply(s)) {
                    return Some((x, s));
                }
            }
        }
        None
    }

    /// Full pairwise scan for a homomorphism violation.
    pub fn full_violation(&self) -> Option<(usize, usize)> {
        let (d, c) = (&self.domain, &self.codomain);
        for x in d.elements() {
            for y in d.elements() {
                if self.apply(d.mul(x, y)) != c.mul(self.apply(x), self.apply(y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Expands images of the domain's generators along its Cayley graph.
    pub fn from_generator_images(
        domain: &Arc<FiniteGroup>,
        codomain: &Arc<FiniteGroup>,
        images: &[usize],
    ) -> Result<Self> {
        let gens = domain.generators();
        if images.len() != gens.len() {
            return Err(Error::Unsupported(format!(
                "{} generator images given, domain has {} generators",
                images.len(),
                gens.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain.order()) {
            return Err(Error::Unsupported(format!(
                "image {bad} outside the codomain"
            )));
        }
        match extend_images(domain, codomain, images) {
            Extension::Consistent(map) => Ok(Self::new_unchecked(domain, codomain, map)),
            Extension::Conflict { map, edge } => {
                let candidate = Self::new_unchecked(domain, codomain, map);
                let (x, y) = candidate.full_violation().unwrap_or(edge);
                Err(Error::NotAHomomorphism { x, y })
            }
        }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub(crate) fn raw_map(&self) -> &[u32] {
        &self.map
    }

    pub fn map_vec(&self) -> Vec<usize> {
        self.map.iter().map(|&y| y as usize).collect()
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_mask_unchecked(
            &self.codomain,
            Mask::from_iter(self.codomain.order(), self.map.iter().map(|&y| y as usize)),
        )
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_mask_unchecked(
            &self.domain,
            Mask::from_iter(
                self.domain.order(),
                (0..self.map.len()).filter(|&x| self.map[x] == 0),
            ),
        )
    }

    pub fn parts(&self) -> HomParts {
        let kernel = self.kernel();
        let image = self.image();
        HomParts {
            is_injective: kernel.is_trivial(),
            is_surjective: image.is_whole(),
            kernel,
            image,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// `f(S)` for a subgroup `S` of the domain.
    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        if !same_group(s.parent(), &self.domain) {
            return Err(Error::DifferentParents);
        }
        Ok(Subgroup::from_mask_unchecked(
            &self.codomain,
            Mask::from_iter(self.codomain.order(), s.iter().map(|x| self.apply(x))),
        ))
    }

    /// `{x : f(x) ∈ S}` for a subgroup `S` of the codomain.
    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup> {
        if !same_group(s.parent(), &self.codomain) {
            return Err(Error::DifferentParents);
        }
        Ok(Subgroup::from_mask_unchecked(
            &self.domain,
            Mask::from_iter(
                self.domain.order(),
                (0..self.map.len()).filter(|&x| s.contains(self.map[x] as usize)),
            ),
        ))
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !same_group(&self.codomain, &next.domain) {
            return Err(Error::DomainMismatch);
        }
        Ok(Self::new_unchecked(
            &self.domain,
            &next.codomain,
            self.map.iter().map(|&y| next.map[y as usize]).collect(),
        ))
    }
}

/// `g ∘ f`, applying `f` first.
pub fn compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom> {
    f.then(g)
}

pub(crate) enum Extension {
    Consistent(Vec<u32>),
    Conflict { map: Vec<u32>, edge: (usize, usize) },
}

/// Breadth-first extension `f(x s) = f(x) img(s)`; checks every edge.
pub(crate) fn extend_images(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    images: &[usize],
) -> Extension {
    let gens = domain.generators();
    let mut map = vec![u32::MAX; domain.order()];
    map[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut conflict = None;
    while let Some(x) = queue.pop_front() {
        let fx = map[x] as usize;
        for (i, &s) in gens.iter().enumerate() {
            let xs = domain.mul(x, s);
            let want = codomain.mul(fx, images[i]) as u32;
            if map[xs] == u32::MAX {
                map[xs] = want;
                queue.push_back(xs);
            } else if map[xs] != want && conflict.is_none() {
                conflict = Some((x, s));
            }
        }
    }
    match conflict {
        None => Extension::Consistent(map),
        Some(edge) => Extension::Conflict { map, edge },
    }
}

/// A homomorphism from a group to itself.
#[derive(Clone, PartialEq, Eq)]
pub struct Endomorphism(GroupHom);

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo{:?}", self.0)
    }
}

impl Deref for Endomorphism {
    type Target = GroupHom;

    fn deref(&self) -> &GroupHom {
        &self.0
    }
}

impl Endomorphism {
    pub fn from_hom(hom: GroupHom) -> Result<Self> {
        if !same_group(hom.domain(), hom.codomain()) {
            return Err(Error::DomainMismatch);
        }
        let domain = hom.domain.clone();
        Ok(Self(GroupHom {
            codomain: domain,
            ..hom
        }))
    }

    pub fn new(group: &Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        Ok(Self(GroupHom::new(group, group, map)?))
    }

    pub(crate) fn new_unchecked(group: &Arc<FiniteGroup>, map: Vec<u32>) -> Self {
        Self(GroupHom::new_unchecked(group, group, map))
    }

    pub fn from_generator_images(group: &Arc<FiniteGroup>, images: &[usize]) -> Result<Self> {
        Ok(Self(GroupHom::from_generator_images(group, group, images)?))
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Self::new_unchecked(group, (0..group.order() as u32).collect())
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        Self::new_unchecked(group, vec![0; group.order()])
    }

    /// `x ↦ g x g⁻¹`
    pub fn conjugation(group: &Arc<FiniteGroup>, g: usize) -> Self {
        Self::new_unchecked(
            group,
            group.elements().map(|x| group.conj(g, x) as u32).collect(),
        )
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.0.domain()
    }

    pub fn as_hom(&self) -> &GroupHom {
        &self.0
    }

    pub fn into_hom(self) -> GroupHom {
        self.0
    }

    /// `next ∘ self`
    pub fn then_endo(&self, next: &Endomorphism) -> Result<Endomorphism> {
        Ok(Self(self.0.then(&next.0)?))
    }

    pub fn power(&self, k: usize) -> Endomorphism {
        let mut acc: Vec<u32> = (0..self.group().order() as u32).collect();
        for _ in 0..k {
            for v in acc.iter_mut() {
                *v = self.0.map[*v as usize];
            }
        }
        Self::new_unchecked(self.group(), acc)
    }

    pub fn commutes_with(&self, other: &Endomorphism) -> bool {
        (0..self.map.len())
            .all(|x| self.map[other.map[x] as usize] == other.map[self.map[x] as usize])
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_injective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, direct_product};

    fn times(g: &Arc<FiniteGroup>, m: usize) -> Endomorphism {
        let n = g.order();
        Endomorphism::new(g, (0..n).map(|x| x * m % n).collect()).unwrap()
    }

    /// sign map S3 -> Z2 on the dihedral model: reflections are odd
    fn sign(s3: &Arc<FiniteGroup>, z2: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom::new(s3, z2, (0..6).map(|x| x % 2).collect()).unwrap()
    }

    #[test]
    fn hom_parts_examples() {
        let z4 = cyclic(4).unwrap();
        let id = Endomorphism::identity(&z4);
        let p = id.parts();
        assert!(p.kernel.is_trivial() && p.image.is_whole());
        assert!(p.is_injective && p.is_surjective);

        let p = times(&z4, 2).parts();
        assert_eq!(p.kernel.elements(), vec![0, 2]);
        assert_eq!(p.image.elements(), vec![0, 2]);

        let s3 = dihedral(3).unwrap();
        let z2 = cyclic(2).unwrap();
        let p = sign(&s3, &z2).parts();
        assert_eq!(p.kernel.size(), 3);
        assert!(p.is_surjective);
    }

    #[test]
    fn composition() {
        let z8 = cyclic(8).unwrap();
        let d = times(&z8, 2);
        assert_eq!(d.then_endo(&d).unwrap(), times(&z8, 4));
        let id = Endomorphism::identity(&z8);
        assert_eq!(compose(&id, &d).unwrap(), *d.as_hom());

        let s3 = dihedral(3).unwrap();
        let z2 = cyclic(2).unwrap();
        let rot = Subgroup::generated(&s3, [2]);
        let (_, inclusion) = rot.as_group();
        let composite = compose(&inclusion, &sign(&s3, &z2)).unwrap();
        assert!(composite.map_vec().iter().all(|&y| y == 0));
        assert_eq!(
            compose(&sign(&s3, &z2), &inclusion).unwrap_err(),
            Error::DomainMismatch
        );
    }

    #[test]
    fn preimages() {
        let z4 = cyclic(4).unwrap();
        let d = times(&z4, 2);
        assert!(d.preimage(&Subgroup::whole(&z4)).unwrap().is_whole());
        let h = Subgroup::generated(&z4, [2]);
        assert!(d.preimage(&h).unwrap().is_whole());
        let id = Endomorphism::identity(&z4);
        assert_eq!(id.preimage(&h).unwrap(), h);
    }

    #[test]
    fn generator_images_with_relation_violation() {
        // Z4 x Z3: send the order-4 generator to the order-3 one
        let g = direct_product(&cyclic(4).unwrap(), &cyclic(3).unwrap()).unwrap();
        let gens = g.generators().to_vec();
        let err = Endomorphism::from_generator_images(&g, &[gens[1], gens[1]]).unwrap_err();
        let Error::NotAHomomorphism { x, y } = err else {
            panic!("expected NotAHomomorphism, got {err:?}");
        };
        assert!(x < g.order() && y < g.order());

        let ok = Endomorphism::from_generator_images(&g, &[gens[0], 0]).unwrap();
        assert_eq!(ok.image().size(), 4);
    }

    #[test]
    fn validation_rejects_non_homs() {
        let z4 = cyclic(4).unwrap();
        assert!(matches!(
            Endomorphism::new(&z4, vec![0, 1, 3, 2]),
            Err(Error::NotAHomomorphism { .. })
        ));
    }

    #[test]
    fn conjugations_are_automorphisms() {
        let g = dihedral(4).unwrap();
        for x in g.elements() {
            let c = Endomorphism::conjugation(&g, x);
            assert!(c.full_violation().is_none());
            assert!(c.is_automorphism());
        }
    }
}
