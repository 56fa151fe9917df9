use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use profend::catalog::{standard_catalog, CatalogEntry};
use profend::endo::{contraction, shrinkind_check, verify_theorem_a};
use profend::group::{Endomorphism, FiniteGroup, Subgroup};
use profend::lattice::{enumerate_subgroups, residual_intersection, AutoSet};
use profend::oracle;
use profend::tower::{build_tower, levelwise_contraction, TowerKind};

/// Catalog groups of order at most 200 with their full subgroup lists.
fn small() -> &'static [(CatalogEntry, Vec<Subgroup>)] {
    static SMALL: OnceLock<Vec<(CatalogEntry, Vec<Subgroup>)>> = OnceLock::new();
    SMALL.get_or_init(|| {
        standard_catalog()
            .unwrap()
            .into_iter()
            .filter(|e| e.group.order() <= 200)
            .map(|e| {
                let subs = enumerate_subgroups(&e.group, e.group.order()).entries;
                (e, subs)
            })
            .collect()
    })
}

/// `(group, endo a, endo b, subgroup)` as raw indices, reduced modulo sizes.
fn pick() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (
        any::<usize>(),
        any::<usize>(),
        any::<usize>(),
        any::<usize>(),
    )
        .prop_map(|(g, a, b, k)| {
            let all = small();
            let gi = g % all.len();
            let (e, subs) = &all[gi];
            (gi, a % e.endos.len(), b % e.endos.len(), k % subs.len())
        })
}

fn entry(
    gi: usize,
) -> (
    &'static Arc<FiniteGroup>,
    &'static [Endomorphism],
    &'static [Subgroup],
) {
    let (e, subs) = &small()[gi];
    (&e.group, &e.endos, subs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composite_is_a_homomorphism((gi, a, b, _) in pick()) {
        let (g, endos, _) = entry(gi);
        let (f, h) = (&endos[a], &endos[b]);
        let fh = f.then_endo(h).unwrap();
        prop_assert!(fh.as_hom().full_violation().is_none());
        for x in g.elements() {
            prop_assert_eq!(fh.apply(x), h.apply(f.apply(x)));
        }
    }

    #[test]
    fn lagrange((gi, _, _, k) in pick()) {
        let (g, _, subs) = entry(gi);
        let s = &subs[k];
        prop_assert_eq!(g.order() % s.size(), 0);
        prop_assert_eq!(s.size() * s.index(), g.order());
    }

    #[test]
    fn kernel_times_image_is_domain((gi, a, b, _) in pick()) {
        let (g, endos, _) = entry(gi);
        for f in [endos[a].clone(), endos[a].then_endo(&endos[b]).unwrap()] {
            prop_assert_eq!(f.kernel().size() * f.image().size(), g.order());
            prop_assert!(f.kernel().is_normal());
        }
    }

    #[test]
    fn contraction_splits_the_group((gi, a, _, _) in pick()) {
        let (g, endos, _) = entry(gi);
        let r = contraction(&endos[a]);
        prop_assert!(r.con.is_normal());
        prop_assert!(r.con.intersection(&r.stable_image).unwrap().is_trivial());
        prop_assert_eq!(r.con.size() * r.stable_image.size(), g.order());
        prop_assert_eq!(r.con.members(), &oracle::orbit_contraction(&endos[a]));
    }

    #[test]
    fn theorem_a_on_composites((gi, a, b, _) in pick()) {
        let (_, endos, _) = entry(gi);
        let f = endos[a].then_endo(&endos[b]).unwrap();
        let r = verify_theorem_a(&f);
        prop_assert!(r.passed(), "{:?}", r.checks.failures().collect::<Vec<_>>());
    }

    #[test]
    fn shrinkind_never_fails((gi, a, _, k) in pick()) {
        let (_, endos, subs) = entry(gi);
        prop_assert!(shrinkind_check(&endos[a], &subs[k]).unwrap().passed());
    }

    #[test]
    fn preimage_of_subgroup_is_subgroup((gi, a, _, k) in pick()) {
        let (g, endos, subs) = entry(gi);
        let pre = endos[a].preimage(&subs[k]).unwrap();
        prop_assert_eq!(pre.members(), &oracle::closure(g, &pre.elements()));
        prop_assert!(endos[a].kernel().is_subgroup_of(&pre));
    }

    #[test]
    fn residuals_shrink_with_n_and_grow_with_omega((gi, a, b, _) in pick(), n in 1usize..12, m in 1usize..12) {
        let (g, endos, _) = entry(gi);
        let (lo, hi) = (n.min(m), n.max(m));
        let empty = AutoSet::empty(g);
        prop_assert!(residual_intersection(g, hi, &empty).is_subgroup_of(&residual_intersection(g, lo, &empty)));

        let autos: Vec<Endomorphism> = [&endos[a], &endos[b]].into_iter().filter(|f| f.is_automorphism()).cloned().collect();
        let smaller = AutoSet::new(g, autos.iter().take(1).cloned()).unwrap();
        let larger = AutoSet::new(g, autos).unwrap();
        prop_assert!(residual_intersection(g, n, &empty).is_subgroup_of(&residual_intersection(g, n, &smaller)));
        prop_assert!(residual_intersection(g, n, &smaller).is_subgroup_of(&residual_intersection(g, n, &larger)));
    }
}

fn tower_kind() -> impl Strategy<Value = TowerKind> {
    let leaf = prop_oneof![
        prop::sample::select(vec![2u64, 3, 5]).prop_map(TowerKind::Zp),
        prop::sample::select(vec![2u64, 3]).prop_map(|p| TowerKind::Zpn(p, 2)),
        prop::sample::select(vec![2u64, 3]).prop_map(TowerKind::UnitsSemidirect),
        Just(TowerKind::S3TimesZ2),
        Just(TowerKind::Trivial),
        Just(TowerKind::ConstantS3),
    ];
    leaf.prop_recursive(1, 2, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| TowerKind::Product(Box::new(a), Box::new(b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn con_projects_into_con(kind in tower_kind(), depth in 1usize..4) {
        let Ok((tower, family)) = build_tower(&kind, depth) else {
            // products can exceed the order guard
            return Ok(());
        };
        let r = levelwise_contraction(&tower, &family);
        prop_assert!(r.coherence.iter().all(|c| c.projection_inclusion));
        prop_assert!(r.passed());
        for (k, g) in tower.levels().iter().enumerate() {
            let c = &r.levels[k].contraction;
            prop_assert_eq!(c.con.size() * c.stable_image.size(), g.order());
        }
    }
}
