use std::sync::Arc;

use crate::check::CheckRecord;
use crate::group::{prime_divisors, same_group, Endomorphism, FiniteGroup, GroupHom, Subgroup};
use crate::lattice::{enumerate_normals, o_pi_from_normals};
use crate::mask::Mask;
use crate::{Error, Result};

/// Default node budget for the injective-homomorphism search.
pub const DEFAULT_SEARCH_BUDGET: usize = 10_000_000;

/// `|G : φ⁻¹(K)| ≤ |G : K|`, and `φ(G)K = G` whenever the indices agree.
pub fn shrinkind_check(phi: &Endomorphism, k: &Subgroup) -> Result<CheckRecord> {
    let g = phi.group();
    if !same_group(k.parent(), g) {
        return Err(Error::DifferentParents);
    }
    let pre = phi.preimage(k)?;
    let mut checks = CheckRecord::new();
    checks.push_detail(
        "index_does_not_grow",
        pre.index() <= k.index(),
        format!("{} <= {}", pre.index(), k.index()),
    );
    if pre.index() == k.index() {
        let covered = phi.image().product_set(k)?.count() == g.order();
        checks.push("equal_index_image_covers", covered);
    }
    Ok(checks)
}

/// The preimage of a normal subgroup under an endomorphism is normal.
pub fn normend_check(phi: &Endomorphism, k: &Subgroup) -> Result<CheckRecord> {
    if !same_group(k.parent(), phi.group()) {
        return Err(Error::DifferentParents);
    }
    if !k.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut checks = CheckRecord::new();
    checks.push("preimage_normal", phi.preimage(k)?.is_normal());
    Ok(checks)
}

/// `O^π(H) = O^π(G)` for `H ≤ G` once `π` covers the primes of
/// `|G : Core_G(H)|`.
pub fn lambdareslem_check(h: &Subgroup, primes: &[u64]) -> Result<CheckRecord> {
    let g = h.parent();
    let core_index = h.core().index() as u64;
    let missing: Vec<u64> = prime_divisors(core_index)
        .into_iter()
        .filter(|p| !primes.contains(p))
        .collect();
    if !missing.is_empty() {
        return Err(Error::PreconditionPrimes { missing });
    }
    let og = o_pi_from_normals(g, &enumerate_normals(g), primes)?;
    let (hg, inclusion) = h.as_group();
    let oh = o_pi_from_normals(&hg, &enumerate_normals(&hg), primes)?;
    let mut checks = CheckRecord::new();
    checks.push_detail(
        "residuals_equal",
        inclusion.image_of(&oh)? == og,
        format!("|O(H)| = {}, |O(G)| = {}", oh.size(), og.size()),
    );
    Ok(checks)
}

/// A normal subgroup `K` of `G` with `G/K` simple and no injective
/// homomorphism `G → K`.
#[derive(Clone, Debug)]
pub struct SimpleWitness {
    pub k: Subgroup,
    pub quotient_simple: bool,
    pub injective_into_k: usize,
}

#[derive(Clone, Debug)]
pub struct HomSearchReport {
    pub count: usize,
    pub witnesses: Vec<GroupHom>,
    pub nodes: usize,
    pub simple_witness: Option<SimpleWitness>,
}

/// Counts injective homomorphisms from `g` into the subgroup `h`, keeping up
/// to `cap` of them. When none exist and `h` lives in `g` itself, also
/// locates a normal subgroup with simple quotient that admits no embedding.
pub fn hom_search(g: &Arc<FiniteGroup>, h: &Subgroup, cap: usize) -> Result<HomSearchReport> {
    hom_search_with_budget(g, h, cap, DEFAULT_SEARCH_BUDGET)
}

pub fn hom_search_with_budget(
    g: &Arc<FiniteGroup>,
    h: &Subgroup,
    cap: usize,
    budget: usize,
) -> Result<HomSearchReport> {
    let mut report = search(g, h, cap, budget)?;
    if report.count == 0 && same_group(h.parent(), g) {
        report.simple_witness = simple_witness(g, budget)?;
    }
    Ok(report)
}

fn simple_witness(g: &Arc<FiniteGroup>, budget: usize) -> Result<Option<SimpleWitness>> {
    let normals = enumerate_normals(g);
    for k in normals.iter().filter(|k| k.index() > 1) {
        let simple = !normals
            .iter()
            .any(|n| n.size() > k.size() && n.index() > 1 && k.is_subgroup_of(n));
        if !simple {
            continue;
        }
        let found = search(g, k, 0, budget)?.count;
        if found == 0 {
            return Ok(Some(SimpleWitness {
                k: k.clone(),
                quotient_simple: true,
                injective_into_k: 0,
            }));
        }
    }
    Ok(None)
}

/// Consistent partial map on the subgroup generated by the first
/// `images.len()` generators, or `None` on conflict. With `injective_size`
/// set, a collision in the image also rejects.
fn extend_prefix(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    injective_size: Option<usize>,
) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; g.order()];
    map[0] = 0;
    let mut seen = Mask::empty(h.order());
    seen.insert(0);
    let mut reached = 1;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x] as usize;
        for (&s, &t) in gens.iter().zip(images) {
            let xs = g.mul(x, s);
            let y = h.mul(fx, t) as u32;
            if map[xs] == u32::MAX {
                map[xs] = y;
                if !seen.insert(y as usize) && injective_size.is_some() {
                    return None;
                }
                reached += 1;
                queue.push_back(xs);
            } else if map[xs] != y {
                return None;
            }
        }
    }
    match injective_size {
        Some(want) if reached != want => None,
        _ => Some(map),
    }
}

fn search(
    g: &Arc<FiniteGroup>,
    h: &Subgroup,
    cap: usize,
    budget: usize,
) -> Result<HomSearchReport> {
    walk(g, h, cap, budget, true)
}

/// Every homomorphism `g → h.parent()` with image inside `h`; fails once more
/// than `limit` exist.
pub fn all_homomorphisms(
    g: &Arc<FiniteGroup>,
    h: &Subgroup,
    limit: usize,
) -> Result<Vec<GroupHom>> {
    let r = walk(g, h, limit + 1, DEFAULT_SEARCH_BUDGET, false)?;
    if r.count > limit {
        return Err(Error::SearchBudgetExceeded { budget: limit });
    }
    Ok(r.witnesses)
}

fn walk(
    g: &Arc<FiniteGroup>,
    h: &Subgroup,
    cap: usize,
    budget: usize,
    injective: bool,
) -> Result<HomSearchReport> {
    let mut report = HomSearchReport {
        count: 0,
        witnesses: Vec::new(),
        nodes: 0,
        simple_witness: None,
    };
    if injective && (g.order() > h.size() || h.size() % g.order() != 0) {
        return Ok(report);
    }
    let gens: Vec<usize> = g.generators().to_vec();
    let hp = h.parent();
    if gens.is_empty() {
        report.count = 1;
        if cap > 0 {
            report
                .witnesses
                .push(GroupHom::new_unchecked(g, hp, vec![0; g.order()]));
        }
        return Ok(report);
    }
    let sizes: Vec<usize> = (1..=gens.len())
        .map(|i| g.closure_mask(gens[..i].iter().copied()).count())
        .collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            h.iter()
                .filter(|&y| {
                    let oy = hp.element_order(y);
                    if injective {
                        oy == o
                    } else {
                        o % oy == 0
                    }
                })
                .collect()
        })
        .collect();

    let mut images = Vec::with_capacity(gens.len());
    let mut cursor = vec![0usize; gens.len()];
    let mut depth = 0;
    loop {
        if cursor[depth] == candidates[depth].len() {
            if depth == 0 {
                break;
            }
            cursor[depth] = 0;
            depth -= 1;
            images.pop();
            continue;
        }
        let y = candidates[depth][cursor[depth]];
        cursor[depth] += 1;
        report.nodes += 1;
        if report.nodes > budget {
            return Err(Error::SearchBudgetExceeded { budget });
        }
        images.push(y);
        let want = if injective { Some(sizes[depth]) } else { None };
        match extend_prefix(g, hp, &gens[..=depth], &images, want) {
            Some(map) if depth + 1 == gens.len() => {
                report.count += 1;
                if report.witnesses.len() < cap {
                    report.witnesses.push(GroupHom::new_unchecked(g, hp, map));
                }
                images.pop();
            }
            Some(_) => depth += 1,
            None => {
                images.pop();
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct FewPrimesReport {
    pub checks: CheckRecord,
    pub o_pi_domain: usize,
    pub o_pi_codomain: usize,
    pub image_order: usize,
}

impl FewPrimesReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Pushes an injective `φ: G → H` down to `G/O^π(G) → H/O^π(H)` and checks
/// the induced map is well defined, injective, and has the expected image.
pub fn fewprimes_check(phi: &GroupHom, primes: &[u64]) -> Result<FewPrimesReport> {
    if !phi.is_injective() {
        return Err(Error::NotInjective);
    }
    let (g, h) = (phi.domain(), phi.codomain());
    let image = phi.image();
    let core_index = (h.order() / image.core().size()) as u64;
    let missing: Vec<u64> = prime_divisors(core_index)
        .into_iter()
        .filter(|p| !primes.contains(p))
        .collect();
    if !missing.is_empty() {
        return Err(Error::PreconditionPrimes { missing });
    }

    let og = o_pi_from_normals(g, &enumerate_normals(g), primes)?;
    let oh = o_pi_from_normals(h, &enumerate_normals(h), primes)?;
    let (qg, pg) = og.quotient()?;
    let (qh, ph) = oh.quotient()?;

    let mut psi = vec![u32::MAX; qg.order()];
    let mut well_defined = true;
    for x in g.elements() {
        let c = pg.apply(x);
        let target = ph.apply(phi.apply(x)) as u32;
        if psi[c] == u32::MAX {
            psi[c] = target;
        } else if psi[c] != target {
            well_defined = false;
        }
    }
    let mut checks = CheckRecord::new();
    checks.push("well_defined", well_defined);
    let psi = GroupHom::new(&qg, &qh, psi.iter().map(|&v| v as usize).collect());
    checks.push("homomorphism", psi.is_ok());
    let mut image_order = 0;
    if let Ok(psi) = psi {
        checks.push("injective", psi.is_injective());
        let want = ph.image_of(&image.join(&oh)?)?;
        let got = psi.image();
        image_order = got.size();
        checks.push("image_matches", got == want);
    }
    Ok(FewPrimesReport {
        checks,
        o_pi_domain: og.size(),
        o_pi_codomain: oh.size(),
        image_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, direct_product, symmetric};

    #[test]
    fn shrinkind_examples() {
        let z4 = cyclic(4).unwrap();
        let double = Endomorphism::new(&z4, vec![0, 2, 0, 2]).unwrap();
        let k = Subgroup::from_elements(&z4, &[0, 2]).unwrap();
        let r = shrinkind_check(&double, &k).unwrap();
        assert!(r.passed());
        assert_eq!(r.len(), 1);
        let s3 = dihedral(3).unwrap();
        let c = Endomorphism::conjugation(&s3, 1);
        for k in crate::lattice::enumerate_subgroups(&s3, 6).entries {
            let r = shrinkind_check(&c, &k).unwrap();
            assert!(r.passed());
            assert_eq!(r.get("equal_index_image_covers"), Some(true));
        }
    }

    #[test]
    fn embeddings_of_z3_in_s3() {
        let z3 = cyclic(3).unwrap();
        let s3 = symmetric(3).unwrap();
        let r = hom_search(&z3, &Subgroup::whole(&s3), 10).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.witnesses.iter().all(|w| w.is_injective()));
        // brute force over all 6^3 maps
        let mut brute = 0;
        for a in 0..6 {
            for b in 0..6 {
                let map = vec![0, a, b];
                if GroupHom::new(&z3, &s3, map)
                    .map(|f| f.is_injective())
                    .unwrap_or(false)
                {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 2);
    }

    #[test]
    fn self_embeddings_and_budget() {
        let g = dihedral(4).unwrap();
        let r = hom_search(&g, &Subgroup::whole(&g), 1).unwrap();
        assert_eq!(r.count, 8);
        assert_eq!(r.witnesses.len(), 1);
        assert!(matches!(
            hom_search_with_budget(&g, &Subgroup::whole(&g), 1, 2),
            Err(Error::SearchBudgetExceeded { budget: 2 })
        ));
    }

    #[test]
    fn order_obstruction_gives_simple_witness() {
        let z4 = cyclic(4).unwrap();
        let h = Subgroup::from_elements(&z4, &[0, 2]).unwrap();
        let r = hom_search(&z4, &h, 4).unwrap();
        assert_eq!(r.count, 0);
        let w = r.simple_witness.unwrap();
        assert_eq!(w.k.elements(), vec![0, 2]);
        assert!(w.quotient_simple);
    }

    #[test]
    fn fewprimes_examples() {
        let s3 = symmetric(3).unwrap();
        let z2 = cyclic(2).unwrap();
        let t = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let phi = GroupHom::new(&z2, &s3, vec![0, t]).unwrap();
        let r = fewprimes_check(&phi, &[2, 3]).unwrap();
        assert!(r.passed());
        assert_eq!((r.o_pi_domain, r.o_pi_codomain, r.image_order), (1, 1, 2));
        assert!(matches!(
            fewprimes_check(&phi, &[2]),
            Err(Error::PreconditionPrimes { missing }) if missing == vec![3]
        ));
        let z3 = cyclic(3).unwrap();
        let c = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let phi = GroupHom::new(&z3, &s3, vec![0, c, s3.mul(c, c)]).unwrap();
        let r = fewprimes_check(&phi, &[2, 3]).unwrap();
        assert!(r.passed());
        assert_eq!(r.image_order, 3);
        // image normal of index 2: only 2 is needed
        let r = fewprimes_check(&phi, &[2]).unwrap();
        assert!(r.passed());
        assert_eq!((r.o_pi_domain, r.o_pi_codomain, r.image_order), (3, 3, 1));
    }

    #[test]
    fn all_endomorphisms_of_small_groups() {
        // Hom(Z/n, Z/n) has n elements; End(S3) has 10; End(Z2^2) has 16
        let z12 = cyclic(12).unwrap();
        assert_eq!(
            all_homomorphisms(&z12, &Subgroup::whole(&z12), 100)
                .unwrap()
                .len(),
            12
        );
        let s3 = symmetric(3).unwrap();
        assert_eq!(
            all_homomorphisms(&s3, &Subgroup::whole(&s3), 100)
                .unwrap()
                .len(),
            10
        );
        let v = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap();
        assert_eq!(
            all_homomorphisms(&v, &Subgroup::whole(&v), 100)
                .unwrap()
                .len(),
            16
        );
        assert!(all_homomorphisms(&v, &Subgroup::whole(&v), 15).is_err());
    }

    #[test]
    fn normend_and_lambdareslem() {
        let s3 = symmetric(3).unwrap();
        let a3 = crate::lattice::enumerate_normals(&s3)[1].clone();
        assert_eq!(a3.size(), 3);
        for f in all_homomorphisms(&s3, &Subgroup::whole(&s3), 100).unwrap() {
            let f = Endomorphism::from_hom(f).unwrap();
            assert!(normend_check(&f, &a3).unwrap().passed());
        }
        let t = Subgroup::generated(
            &s3,
            [s3.elements().find(|&x| s3.element_order(x) == 2).unwrap()],
        );
        assert!(matches!(
            lambdareslem_check(&t, &[2]),
            Err(Error::PreconditionPrimes { .. })
        ));
        assert!(lambdareslem_check(&t, &[2, 3]).unwrap().passed());
        assert!(lambdareslem_check(&a3, &[2]).unwrap().passed());
    }

    #[test]
    fn fewprimes_requires_injective() {
        let g = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap();
        let z2 = cyclic(2).unwrap();
        let proj = GroupHom::new(&g, &z2, vec![0, 0, 1, 1]).unwrap();
        assert!(matches!(
            fewprimes_check(&proj, &[2]),
            Err(Error::NotInjective)
        ));
    }
}
