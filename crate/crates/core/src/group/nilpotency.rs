use std::sync::Arc;

use super::{FiniteGroup, Subgroup};

#[derive(Clone, Debug)]
pub struct Nilpotency {
    pub is_nilpotent: bool,
    /// Nilpotency class; `None` when the lower central series stalls above 1.
    pub class: Option<usize>,
    pub lower_central_series: Vec<Subgroup>,
    pub derived_series: Vec<Subgroup>,
    pub is_solvable: bool,
}

/// `[A, B]` for subgroups of the same group.
pub fn commutator_subgroup(a: &Subgroup, b: &Subgroup) -> Subgroup {
    let g = a.parent();
    let (ga, gb) = (a.elements(), b.elements());
    let mut gens = Vec::new();
    let mut current = Subgroup::trivial(g);
    for &x in &ga {
        for &y in &gb {
            let c = g.commutator(x, y);
            if !current.contains(c) {
                gens.push(c);
                current = Subgroup::generated(g, gens.iter().copied());
            }
        }
    }
    current
}

fn stabilize(start: Subgroup, step: impl Fn(&Subgroup) -> Subgroup) -> Vec<Subgroup> {
    let mut series = vec![start];
    loop {
        let last = series.last().expect("non-empty");
        let next = step(last);
        if next.size() == last.size() {
            return series;
        }
        series.push(next);
    }
}

/// Lower central and derived series of `g`.
pub fn nilpotency(g: &Arc<FiniteGroup>) -> Nilpotency {
    let whole = Subgroup::whole(g);
    let lower = stabilize(whole.clone(), |s| commutator_subgroup(s, &whole));
    let derived = stabilize(whole, |s| commutator_subgroup(s, s));
    let is_nilpotent = lower.last().expect("non-empty").is_trivial();
    Nilpotency {
        is_nilpotent,
        class: is_nilpotent.then(|| lower.len() - 1),
        is_solvable: derived.last().expect("non-empty").is_trivial(),
        lower_central_series: lower,
        derived_series: derived,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{alternating, cyclic, dihedral, quaternion, symmetric};

    fn sizes(series: &[Subgroup]) -> Vec<usize> {
        series.iter().map(Subgroup::size).collect()
    }

    #[test]
    fn abelian_class_at_most_one() {
        let n = nilpotency(&cyclic(12).unwrap());
        assert!(n.is_nilpotent && n.is_solvable);
        assert_eq!(n.class, Some(1));
        assert_eq!(nilpotency(&cyclic(1).unwrap()).class, Some(0));
    }

    #[test]
    fn s3_solvable_not_nilpotent() {
        let n = nilpotency(&dihedral(3).unwrap());
        assert!(!n.is_nilpotent);
        assert!(n.is_solvable);
        assert_eq!(n.class, None);
        assert_eq!(sizes(&n.lower_central_series), vec![6, 3]);
    }

    #[test]
    fn dihedral_eight_class_two() {
        let n = nilpotency(&dihedral(4).unwrap());
        assert!(n.is_nilpotent);
        assert_eq!(n.class, Some(2));
        assert_eq!(sizes(&n.lower_central_series), vec![8, 2, 1]);
        assert_eq!(nilpotency(&quaternion().unwrap()).class, Some(2));
    }

    #[test]
    fn larger_permutation_groups() {
        let s4 = nilpotency(&symmetric(4).unwrap());
        assert!(!s4.is_nilpotent && s4.is_solvable);
        assert_eq!(sizes(&s4.derived_series), vec![24, 12, 4, 1]);
        let a5 = nilpotency(&alternating(5).unwrap());
        assert!(!a5.is_solvable);
    }
}
