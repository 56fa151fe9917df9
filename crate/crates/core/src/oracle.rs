//! Slow reference computations used to cross-check the main algorithms.
//! Each one works from the definitions with plain loops and shares no code
//! with the routine it checks.

use std::collections::HashSet;

use crate::group::{Endomorphism, FiniteGroup, GroupHom};
use crate::mask::Mask;

/// Closure of a set under multiplication, by repeated squaring of the set.
pub fn closure(g: &FiniteGroup, seed: &[usize]) -> Mask {
    let mut set: Vec<usize> = vec![0];
    let mut mask = Mask::from_iter(g.order(), [0]);
    for &s in seed {
        if mask.insert(s) {
            set.push(s);
        }
    }
    loop {
        let mut grew = false;
        let snapshot = set.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                let c = g.mul(a, b);
                if mask.insert(c) {
                    set.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return mask;
        }
    }
}

/// Every subgroup of `g`. Depth-first over increasing element sequences: a
/// branch adds an element larger than the last one added and outside the
/// current closure, so each subgroup is reached from its own element list.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Mask> {
    let mut found = HashSet::new();
    let mut stack = vec![(closure(g, &[]), Vec::<usize>::new(), 0usize)];
    while let Some((cur, seq, next)) = stack.pop() {
        if !found.insert(cur.clone()) {
            continue;
        }
        for x in next..g.order() {
            if cur.contains(x) {
                continue;
            }
            let mut s = seq.clone();
            s.push(x);
            let c = closure(g, &s);
            if !found.contains(&c) {
                stack.push((c, s, x + 1));
            }
        }
    }
    let mut out: Vec<Mask> = found.into_iter().collect();
    out.sort_by_key(|m| (g.order() / m.count(), m.iter().collect::<Vec<_>>()));
    out
}

/// `g x g⁻¹ ∈ S` for every `g` and `x ∈ S`.
pub fn is_normal(g: &FiniteGroup, s: &Mask) -> bool {
    g.elements()
        .all(|a| s.iter().all(|x| s.contains(g.mul(g.mul(a, x), g.inv(a)))))
}

/// Elements sent to the identity by some `φⁿ` with `n ≤ 2|G|`.
pub fn orbit_contraction(phi: &Endomorphism) -> Mask {
    let g = phi.group();
    let steps = 2 * g.order();
    Mask::from_iter(
        g.order(),
        g.elements().filter(|&x| {
            let mut y = x;
            for _ in 0..=steps {
                if y == 0 {
                    return true;
                }
                y = phi.apply(y);
            }
            false
        }),
    )
}

/// Meet of the images of `φⁿ` for `n ≤ 2|G|`.
pub fn orbit_stable_image(phi: &Endomorphism) -> Mask {
    let g = phi.group();
    let mut image: Vec<usize> = g.elements().collect();
    let mut acc = Mask::full(g.order());
    for _ in 0..2 * g.order() {
        image = image.iter().map(|&x| phi.apply(x)).collect();
        acc = acc.and(&Mask::from_iter(g.order(), image.iter().copied()));
    }
    acc
}

/// Injective homomorphisms counted over every tuple of generator images,
/// each tested against the full multiplication table.
pub fn count_injective_homs(
    g: &std::sync::Arc<FiniteGroup>,
    h: &std::sync::Arc<FiniteGroup>,
) -> usize {
    let gens = g.generators();
    let r = gens.len();
    let mut count = 0;
    let total = h.order().pow(r as u32);
    for code in 0..total {
        let mut images = Vec::with_capacity(r);
        let mut c = code;
        for _ in 0..r {
            images.push(c % h.order());
            c /= h.order();
        }
        if let Ok(f) = GroupHom::from_generator_images(g, h, &images) {
            if f.full_violation().is_none() && f.is_injective() {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, quaternion, symmetric};

    #[test]
    fn subgroup_counts() {
        // known totals: S3 has 6 subgroups, D8 has 10, Q8 has 6, Z12 has 6, S4 has 30
        assert_eq!(all_subgroups(&dihedral(3).unwrap()).len(), 6);
        assert_eq!(all_subgroups(&dihedral(4).unwrap()).len(), 10);
        assert_eq!(all_subgroups(&quaternion().unwrap()).len(), 6);
        assert_eq!(all_subgroups(&cyclic(12).unwrap()).len(), 6);
        assert_eq!(all_subgroups(&symmetric(4).unwrap()).len(), 30);
    }

    #[test]
    fn orbit_oracles() {
        let g = cyclic(8).unwrap();
        let phi = Endomorphism::new(&g, (0..8).map(|x| 2 * x % 8).collect()).unwrap();
        assert_eq!(orbit_contraction(&phi).count(), 8);
        assert_eq!(orbit_stable_image(&phi).count(), 1);
    }

    #[test]
    fn brute_embeddings() {
        assert_eq!(
            count_injective_homs(&cyclic(3).unwrap(), &symmetric(3).unwrap()),
            2
        );
        assert_eq!(
            count_injective_homs(&dihedral(4).unwrap(), &dihedral(4).unwrap()),
            8
        );
    }
}
