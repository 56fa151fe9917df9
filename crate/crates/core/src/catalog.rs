//! Built-in groups with shipped endomorphisms, and seeded random samples
//! drawn from them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endo::{all_homomorphisms, project_away, scale_first};
use crate::group::{
    alternating, cyclic, dihedral, direct_product, quaternion, semidirect, symmetric, units_mod,
    Action, Endomorphism, FiniteGroup, Subgroup,
};
use crate::Result;

/// Groups up to this order ship every endomorphism.
pub const FULL_END_ORDER: usize = 64;
const FULL_END_LIMIT: usize = 1000;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub endos: Vec<Endomorphism>,
}

/// `Z/p^k ⋊ U(p^k)` with units acting by multiplication.
pub fn units_semidirect_level(p: u64, k: u32) -> Result<Arc<FiniteGroup>> {
    let n = p
        .checked_pow(k)
        .ok_or_else(|| crate::Error::ParamOutOfRange("p^k overflows".into()))?;
    semidirect(
        &cyclic(n as usize)?,
        &units_mod(p, k)?,
        &Action::Multiplication,
    )
}

fn groups() -> Result<Vec<(String, Arc<FiniteGroup>)>> {
    let mut out = Vec::new();
    for n in [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 27] {
        out.push((format!("Z{n}"), cyclic(n)?));
    }
    out.push(("U(9)".into(), units_mod(3, 2)?));
    out.push(("U(16)".into(), units_mod(2, 4)?));
    out.push(("U(25)".into(), units_mod(5, 2)?));
    let c = |n| cyclic(n);
    for (name, l, r) in [
        ("Z2xZ2", 2, 2),
        ("Z2xZ4", 2, 4),
        ("Z4xZ9", 4, 9),
        ("Z3xZ3", 3, 3),
    ] {
        out.push((name.into(), direct_product(&c(l)?, &c(r)?)?));
    }
    out.push((
        "Z2xZ2xZ2".into(),
        direct_product(&direct_product(&c(2)?, &c(2)?)?, &c(2)?)?,
    ));
    out.push(("S3".into(), symmetric(3)?));
    out.push(("D8".into(), dihedral(4)?));
    out.push(("D12".into(), dihedral(6)?));
    out.push(("Q8".into(), quaternion()?));
    out.push(("A4".into(), alternating(4)?));
    out.push(("S4".into(), symmetric(4)?));
    for n in [2, 4, 8] {
        out.push((format!("S3xZ{n}"), direct_product(&symmetric(3)?, &c(n)?)?));
    }
    for (p, k) in [(3u64, 1u32), (3, 2), (3, 3), (2, 2), (2, 3), (5, 2)] {
        out.push((
            format!("Z{}:U({})", p.pow(k), p.pow(k)),
            units_semidirect_level(p, k)?,
        ));
    }
    Ok(out)
}

fn push_unique(list: &mut Vec<Endomorphism>, f: Endomorphism) {
    if !list.contains(&f) {
        list.push(f);
    }
}

/// Every endomorphism up to order [`FULL_END_ORDER`], otherwise a fixed list of
/// built-ins and their pairwise composites.
pub fn shipped_endos(g: &Arc<FiniteGroup>) -> Vec<Endomorphism> {
    if g.order() <= FULL_END_ORDER {
        if let Ok(homs) = all_homomorphisms(g, &Subgroup::whole(g), FULL_END_LIMIT) {
            return homs
                .into_iter()
                .map(|h| Endomorphism::from_hom(h).expect("endomorphism"))
                .collect();
        }
    }
    let mut list = vec![Endomorphism::identity(g), Endomorphism::trivial(g)];
    for m in [2, 3, 5] {
        if let Ok(f) = scale_first(g, m) {
            push_unique(&mut list, f);
        }
    }
    if let Ok(f) = project_away(g, 0) {
        push_unique(&mut list, f);
    }
    if let Ok(f) = project_away(g, 1) {
        push_unique(&mut list, f);
    }
    for &s in g.generators() {
        push_unique(&mut list, Endomorphism::conjugation(g, s));
    }
    let base = list.clone();
    for a in &base {
        for b in &base {
            push_unique(&mut list, a.then_endo(b).expect("same group"));
        }
    }
    list
}

/// Every built-in group with its endomorphisms: all of them up to order
/// [`FULL_END_ORDER`], otherwise identity, trivial, coordinate scalings,
/// projections, inner automorphisms by generators, and pairwise composites.
pub fn standard_catalog() -> Result<Vec<CatalogEntry>> {
    groups()?
        .into_iter()
        .map(|(name, group)| {
            let endos = shipped_endos(&group);
            Ok(CatalogEntry { name, group, endos })
        })
        .collect()
}

/// A random composite of one to three shipped endomorphisms of a catalog
/// group of order at most `max_order`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub group: String,
    pub endo: Endomorphism,
}

pub fn random_samples(
    catalog: &[CatalogEntry],
    count: usize,
    max_order: usize,
    seed: u64,
) -> Vec<Sample> {
    let pool: Vec<&CatalogEntry> = catalog
        .iter()
        .filter(|e| e.group.order() <= max_order && !e.endos.is_empty())
        .collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e = pool[rng.random_range(0..pool.len())];
            let parts = rng.random_range(1..=3);
            let mut f = e.endos[rng.random_range(0..e.endos.len())].clone();
            for _ in 1..parts {
                let g = &e.endos[rng.random_range(0..e.endos.len())];
                f = f.then_endo(g).expect("same group");
            }
            Sample {
                group: e.name.clone(),
                endo: f,
            }
        })
        .collect()
}

/// Unordered pairs of distinct commuting endomorphisms, at most `max`.
pub fn commuting_pairs(endos: &[Endomorphism], max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..endos.len() {
        for j in i + 1..endos.len() {
            if out.len() == max {
                return out;
            }
            if endos[i].commutes_with(&endos[j]) {
                out.push((i, j));
            }
        }
    }
    out
}
