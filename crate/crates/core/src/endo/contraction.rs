use crate::check::CheckRecord;
use crate::group::{Endomorphism, Subgroup};
use crate::mask::Mask;

/// Contraction data for an endomorphism or a commutative semigroup.
#[derive(Clone, Debug)]
pub struct ContractionReport {
    /// `Con(φ)`, or `Con(Λ, K)` for semigroups.
    pub con: Subgroup,
    /// `φ_+(G)`, or `Λ_∩(G)` for semigroups.
    pub stable_image: Subgroup,
    /// Least `m` at which both chains have stopped moving.
    pub depth: usize,
    pub kernel_chain: Vec<Subgroup>,
    pub image_chain: Vec<Subgroup>,
    pub checks: CheckRecord,
}

/// Elements whose forward orbit under `f` ends in a cycle lying inside
/// `target`. Linear time: peel the functional graph down to its cycles,
/// classify each cycle, then propagate back along the peeled trees.
pub fn eventually_in(f: &[u32], target: &Mask) -> Mask {
    let n = f.len();
    let mut indeg = vec![0u32; n];
    for &y in f {
        indeg[y as usize] += 1;
    }
    let mut peeled = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut on_cycle = vec![true; n];
    while let Some(x) = stack.pop() {
        on_cycle[x] = false;
        peeled.push(x);
        let y = f[x] as usize;
        indeg[y] -= 1;
        if indeg[y] == 0 {
            stack.push(y);
        }
    }
    let mut good = vec![false; n];
    let mut done = vec![false; n];
    for start in 0..n {
        if !on_cycle[start] || done[start] {
            continue;
        }
        let mut cycle = vec![start];
        let mut x = f[start] as usize;
        while x != start {
            cycle.push(x);
            x = f[x] as usize;
        }
        let inside = cycle.iter().all(|&c| target.contains(c));
        for c in cycle {
            good[c] = inside;
            done[c] = true;
        }
    }
    for &x in peeled.iter().rev() {
        good[x] = good[f[x] as usize];
    }
    Mask::from_iter(n, (0..n).filter(|&x| good[x]))
}

/// Stabilized kernel and image chains of `φ`.
pub fn contraction(phi: &Endomorphism) -> ContractionReport {
    let g = phi.group();
    let mut power = Endomorphism::identity(g);
    let mut kernel_chain = vec![power.kernel()];
    let mut image_chain = vec![power.image()];
    loop {
        let next = power.then_endo(phi).expect("same group");
        let k = next.kernel();
        let i = next.image();
        let last = kernel_chain.len() - 1;
        if k.size() == kernel_chain[last].size() && i.size() == image_chain[last].size() {
            break;
        }
        kernel_chain.push(k);
        image_chain.push(i);
        power = next;
    }
    let depth = kernel_chain.len() - 1;
    let con = kernel_chain[depth].clone();
    let stable_image = image_chain[depth].clone();

    let mut checks = CheckRecord::new();
    let trivial = Mask::from_iter(g.order(), [0]);
    let cycle_con = eventually_in(phi.raw_map(), &trivial);
    checks.push("con_matches_eventual_cycles", cycle_con == *con.members());
    checks.push(
        "kernel_chain_strict",
        kernel_chain
            .windows(2)
            .all(|w| w[0].size() < w[1].size() && w[0].is_subgroup_of(&w[1])),
    );
    checks.push(
        "image_chain_strict",
        image_chain
            .windows(2)
            .all(|w| w[0].size() > w[1].size() && w[1].is_subgroup_of(&w[0])),
    );

    ContractionReport {
        con,
        stable_image,
        depth,
        kernel_chain,
        image_chain,
        checks,
    }
}

/// The decomposition `G = Con(φ) ⋊ φ_+(G)` checked as element-set equalities.
#[derive(Clone, Debug)]
pub struct TheoremAReport {
    pub contraction: ContractionReport,
    pub checks: CheckRecord,
}

impl TheoremAReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

pub fn verify_theorem_a(phi: &Endomorphism) -> TheoremAReport {
    let report = contraction(phi);
    let g = phi.group();
    let (con, stable) = (&report.con, &report.stable_image);
    let mut checks = CheckRecord::new();

    checks.push("con_normal", con.is_normal());
    let meet = con.intersection(stable).expect("same parent");
    checks.push("con_meet_stable_trivial", meet.is_trivial());
    let product = con.product_set(stable).expect("same parent");
    checks.push("con_times_stable_is_group", product.count() == g.order());
    let restricted = phi.image_of(stable).expect("same parent");
    checks.push("restriction_bijective_on_stable", restricted == *stable);

    let mut power = Endomorphism::identity(g);
    for k in 0..=report.depth {
        let lhs = power.image_of(con).expect("same parent");
        let rhs = con.intersection(&power.image()).expect("same parent");
        checks.push(format!("power_{k}_con_equals_con_meet_image"), lhs == rhs);
        power = power.then_endo(phi).expect("same group");
    }
    checks.extend("contraction.", &report.checks);

    TheoremAReport {
        contraction: report,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, semidirect, units_mod, Action};
    use std::sync::Arc;

    fn scale_first(
        g: &Arc<crate::group::FiniteGroup>,
        right: usize,
        normal: usize,
        m: usize,
    ) -> Endomorphism {
        Endomorphism::new(
            g,
            g.elements()
                .map(|x| ((x / right) * m % normal) * right + x % right)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_trivial() {
        let g = dihedral(4).unwrap();
        let r = contraction(&Endomorphism::identity(&g));
        assert!(r.con.is_trivial() && r.stable_image.is_whole());
        assert_eq!(r.depth, 0);
        let r = contraction(&Endomorphism::trivial(&g));
        assert!(r.con.is_whole() && r.stable_image.is_trivial());
        assert_eq!(r.depth, 1);
        assert!(r.checks.passed());
    }

    #[test]
    fn doubling_on_z8() {
        let g = cyclic(8).unwrap();
        let phi = Endomorphism::new(&g, (0..8).map(|x| 2 * x % 8).collect()).unwrap();
        let r = contraction(&phi);
        assert!(r.con.is_whole());
        assert!(r.stable_image.is_trivial());
        assert_eq!(r.depth, 3);
        let sizes: Vec<usize> = r.kernel_chain.iter().map(Subgroup::size).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
        assert_eq!(r.kernel_chain[1].elements(), vec![0, 4]);
        assert_eq!(r.kernel_chain[2].elements(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn units_semidirect_level_two() {
        let g = semidirect(
            &cyclic(9).unwrap(),
            &units_mod(3, 2).unwrap(),
            &Action::Multiplication,
        )
        .unwrap();
        let phi = scale_first(&g, 6, 9, 3);
        let a = verify_theorem_a(&phi);
        assert!(a.passed(), "{:?}", a.checks.failures().collect::<Vec<_>>());
        let r = &a.contraction;
        assert_eq!(r.con.size(), 9);
        assert_eq!(r.stable_image.size(), 6);
        // cyclic coordinate: (a, 1) with unit index 0
        assert!(r.con.iter().all(|x| x % 6 == 0));
        assert!(r.stable_image.iter().all(|x| x < 6));
        assert_eq!(r.con.size() * r.stable_image.size(), 54);
    }

    #[test]
    fn dihedral_eight_scaling() {
        let g = dihedral(4).unwrap();
        let phi = scale_first(&g, 2, 4, 2);
        let a = verify_theorem_a(&phi);
        assert!(a.passed());
        assert_eq!(a.contraction.con.size(), 4);
        assert_eq!(a.contraction.stable_image.size(), 2);
    }

    #[test]
    fn automorphisms_have_trivial_con() {
        let g = dihedral(5).unwrap();
        for x in g.elements() {
            let a = verify_theorem_a(&Endomorphism::conjugation(&g, x));
            assert!(a.passed());
            assert!(a.contraction.con.is_trivial());
        }
    }

    #[test]
    fn eventually_in_relative_target() {
        // x -> 2x on Z8: everything falls to 0
        let f: Vec<u32> = (0..8).map(|x| (2 * x % 8) as u32).collect();
        let t = Mask::from_iter(8, [0]);
        assert_eq!(eventually_in(&f, &t).count(), 8);
        // x -> x + 1 on Z4 is one 4-cycle: nothing is eventually inside {0, 2}
        let f: Vec<u32> = vec![1, 2, 3, 0];
        let t = Mask::from_iter(4, [0, 2]);
        assert!(eventually_in(&f, &t).is_empty());
        assert_eq!(eventually_in(&f, &Mask::full(4)).count(), 4);
    }
}
