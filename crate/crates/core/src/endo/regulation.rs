use std::collections::{BTreeSet, HashSet};

use super::semigroup::EndoSemigroup;
use crate::check::CheckRecord;
use crate::group::{same_group, Endomorphism, Structure, Subgroup};
use crate::lattice::{enumerate_normals, residual_family, residual_from_normals, AutoSet};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RegulationReport {
    pub checks: CheckRecord,
    /// `(n, |I_n^Ω(G)|)` at each `n` where the residual can change.
    pub residuals: Vec<(usize, usize)>,
    /// Least `n` with `I_n^Ω(G)` trivial.
    pub trivial_at: Option<usize>,
}

impl RegulationReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

fn map_set<'a>(maps: impl Iterator<Item = &'a [u32]>) -> HashSet<Vec<u32>> {
    maps.map(<[u32]>::to_vec).collect()
}

/// Finite form of the regulation conditions for `Λ` by `Ω`.
pub fn verify_regulation(lambda: &EndoSemigroup, omega: &AutoSet) -> Result<RegulationReport> {
    let g = lambda.parent();
    if !same_group(omega.parent(), g) {
        return Err(Error::DifferentParents);
    }
    let mut checks = CheckRecord::new();
    for (i, lam) in lambda.generators().iter().enumerate() {
        let left: Vec<Endomorphism> = omega
            .maps()
            .iter()
            .map(|w| w.then_endo(lam).expect("same parent"))
            .collect();
        let right: Vec<Endomorphism> = omega
            .maps()
            .iter()
            .map(|w| lam.then_endo(w).expect("same parent"))
            .collect();
        let equal =
            map_set(left.iter().map(|m| m.raw_map())) == map_set(right.iter().map(|m| m.raw_map()));
        checks.push(format!("a_gen_{i}_commutes_with_omega_setwise"), equal);
    }

    let normals = enumerate_normals(g);
    let thresholds: BTreeSet<usize> = residual_family(&normals, g.order(), omega)
        .iter()
        .map(Subgroup::index)
        .collect();
    let mut residuals = Vec::new();
    let mut trivial_at = None;
    let mut stable = true;
    for &n in &thresholds {
        let r = residual_from_normals(g, &normals, n, omega);
        if trivial_at.is_none() && r.is_trivial() {
            trivial_at = Some(n);
        }
        for lam in lambda.generators() {
            if !r.is_invariant_under(lam) {
                stable = false;
            }
        }
        residuals.push((n, r.size()));
    }
    checks.push_detail(
        "b_residuals_open",
        true,
        "every subgroup of a finite group is open",
    );
    checks.push_detail(
        "c_residuals_reach_trivial",
        trivial_at.is_some(),
        trivial_at.map_or("never".to_string(), |n| format!("n = {n}")),
    );
    checks.push("residuals_lambda_stable", stable);

    Ok(RegulationReport {
        checks,
        residuals,
        trivial_at,
    })
}

#[derive(Clone, Debug)]
pub struct TfrelstabReport {
    pub psi: usize,
    pub xi: usize,
    pub restricted: EndoSemigroup,
    pub regulation: RegulationReport,
}

impl TfrelstabReport {
    pub fn passed(&self) -> bool {
        self.regulation.passed()
    }
}

/// For `G = N ⋊ H` with `N`, `H` invariant under `Λ` and `Ω` and `Λ` onto
/// `H`: restrict `Λ` to `N` and check that `Ω|N` together with the
/// conjugation action of `H` regulates it.
pub fn tfrelstab_ii_check(lambda: &EndoSemigroup, omega: &AutoSet) -> Result<TfrelstabReport> {
    let g = lambda.parent();
    if !same_group(omega.parent(), g) {
        return Err(Error::DifferentParents);
    }
    let Structure::Semidirect {
        normal, complement, ..
    } = g.structure()
    else {
        return Err(Error::Unsupported(
            "group is not a recorded semidirect product".into(),
        ));
    };
    let r = complement.order();
    let n_sub = Subgroup::from_mask_unchecked(
        g,
        crate::mask::Mask::from_iter(g.order(), (0..normal.order()).map(|a| a * r)),
    );
    let h_sub = Subgroup::from_mask_unchecked(g, crate::mask::Mask::from_iter(g.order(), 0..r));

    let all_maps = lambda.generators().iter().chain(omega.maps());
    for m in all_maps {
        if !n_sub.is_invariant_under(m) {
            return Err(Error::NotInvariant("N".into()));
        }
        if !h_sub.is_invariant_under(m) {
            return Err(Error::NotInvariant("H".into()));
        }
    }
    for (i, lam) in lambda.generators().iter().enumerate() {
        if lam.image_of(&h_sub)? != h_sub {
            return Err(Error::NotSurjectiveOnH(i));
        }
    }

    let restrict = |m: &Endomorphism| {
        Endomorphism::new_unchecked(
            normal,
            (0..normal.order())
                .map(|a| (m.apply(a * r) / r) as u32)
                .collect(),
        )
    };
    let psi: Vec<Endomorphism> = (0..r)
        .map(|h| {
            Endomorphism::new_unchecked(
                normal,
                (0..normal.order())
                    .map(|a| (g.conj(h, a * r) / r) as u32)
                    .collect(),
            )
        })
        .collect();
    let psi_set = AutoSet::new(normal, psi)?;
    let omega_n = AutoSet::new(normal, omega.maps().iter().map(restrict))?;
    let xi = omega_n.union(&psi_set)?;
    let restricted =
        EndoSemigroup::new(normal, lambda.generators().iter().map(restrict).collect())?;
    let regulation = verify_regulation(&restricted, &xi)?;
    Ok(TfrelstabReport {
        psi: psi_set.len(),
        xi: xi.len(),
        restricted,
        regulation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, semidirect, units_mod, Action, FiniteGroup};
    use std::sync::Arc;

    fn level(k: u32) -> Arc<FiniteGroup> {
        let n = 3usize.pow(k);
        semidirect(
            &cyclic(n).unwrap(),
            &units_mod(3, k).unwrap(),
            &Action::Multiplication,
        )
        .unwrap()
    }

    fn scale_first(g: &Arc<FiniteGroup>, m: usize) -> Endomorphism {
        let Structure::Semidirect {
            normal, complement, ..
        } = g.structure()
        else {
            unreachable!()
        };
        let (n, r) = (normal.order(), complement.order());
        Endomorphism::new(
            g,
            g.elements().map(|x| (x / r * m % n) * r + x % r).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_empty_omega() {
        let g = cyclic(12).unwrap();
        let l = EndoSemigroup::single(&Endomorphism::identity(&g));
        let r = verify_regulation(&l, &AutoSet::empty(&g)).unwrap();
        assert!(r.passed());
        // {0,3,6,9} and {0,4,8} already meet trivially
        assert_eq!(r.trivial_at, Some(4));
    }

    #[test]
    fn dihedral_eight() {
        let g = dihedral(4).unwrap();
        let phi = Endomorphism::new(
            &g,
            g.elements().map(|x| (x / 2 * 2 % 4) * 2 + x % 2).collect(),
        )
        .unwrap();
        let r = verify_regulation(&EndoSemigroup::single(&phi), &AutoSet::empty(&g)).unwrap();
        assert!(r.passed());
        assert_eq!(r.trivial_at, Some(8));
        assert!(r.residuals.contains(&(2, 2)));
    }

    #[test]
    fn unit_conjugation_commutes() {
        let g = level(2);
        let phi = scale_first(&g, 3);
        let omega = AutoSet::new(&g, [Endomorphism::conjugation(&g, 1)]).unwrap();
        let r = verify_regulation(&EndoSemigroup::single(&phi), &omega).unwrap();
        assert_eq!(
            r.checks.get("a_gen_0_commutes_with_omega_setwise"),
            Some(true)
        );
        assert!(r.passed());
    }

    #[test]
    fn tfrelstab_levels() {
        let g = level(1);
        let r = tfrelstab_ii_check(
            &EndoSemigroup::single(&scale_first(&g, 3)),
            &AutoSet::empty(&g),
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.psi, 2);
        assert_eq!(r.regulation.trivial_at, Some(3));
        assert!(r.restricted.generators()[0]
            .raw_map()
            .iter()
            .all(|&v| v == 0));

        let g = level(2);
        let r = tfrelstab_ii_check(
            &EndoSemigroup::single(&scale_first(&g, 3)),
            &AutoSet::empty(&g),
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.psi, 6);
    }

    #[test]
    fn tfrelstab_errors() {
        let g = level(1);
        let triv = Endomorphism::trivial(&g);
        assert!(matches!(
            tfrelstab_ii_check(&EndoSemigroup::single(&triv), &AutoSet::empty(&g)),
            Err(Error::NotSurjectiveOnH(0))
        ));
        // conjugation by a rotation moves H off itself
        let omega = AutoSet::new(&g, [Endomorphism::conjugation(&g, 2)]).unwrap();
        let id = EndoSemigroup::single(&Endomorphism::identity(&g));
        assert!(matches!(tfrelstab_ii_check(&id, &omega), Err(Error::NotInvariant(h)) if h == "H"));
        let z6 = cyclic(6).unwrap();
        assert!(matches!(
            tfrelstab_ii_check(
                &EndoSemigroup::single(&Endomorphism::identity(&z6)),
                &AutoSet::empty(&z6)
            ),
            Err(Error::Unsupported(_))
        ));
    }
}
