//! Finite towers `G_1 ← G_2 ← … ← G_d` of quotients with coherent
//! endomorphism families, standing in for a profinite group and a
//! continuous endomorphism of it. Every verdict is qualified by the depth.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::catalog::units_semidirect_level;
use crate::endo::{o_lambda, verify_theorem_a, EndoSemigroup, TheoremAReport};
use crate::group::{
    cyclic, direct_product, symmetric, Endomorphism, FiniteGroup, GroupHom, Structure, Subgroup,
};
use crate::lattice::{count_profile_with_budget, CountProfile, DEFAULT_NODE_BUDGET};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<Arc<FiniteGroup>>,
    connecting: Vec<GroupHom>,
    label: String,
}

impl Tower {
    /// `connecting[k]` maps level `k + 1` onto level `k`.
    pub fn new(
        levels: Vec<Arc<FiniteGroup>>,
        connecting: Vec<GroupHom>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::ParamOutOfRange(
                "a tower needs at least one level".into(),
            ));
        }
        if connecting.len() + 1 != levels.len() {
            return Err(Error::ParamOutOfRange(
                "need one connecting map per adjacent pair".into(),
            ));
        }
        for (k, pi) in connecting.iter().enumerate() {
            if !crate::group::same_group(pi.domain(), &levels[k + 1])
                || !crate::group::same_group(pi.codomain(), &levels[k])
            {
                return Err(Error::DomainMismatch);
            }
            if !pi.image().is_whole() {
                return Err(Error::ParamOutOfRange(format!(
                    "connecting map {k} is not surjective"
                )));
            }
        }
        Ok(Self {
            levels,
            connecting,
            label: label.into(),
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Arc<FiniteGroup>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &Arc<FiniteGroup> {
        &self.levels[k]
    }

    pub fn connecting(&self) -> &[GroupHom] {
        &self.connecting
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Image in level `to` of an element of level `from >= to`.
    pub fn project(&self, from: usize, to: usize, mut x: usize) -> usize {
        for k in (to..from).rev() {
            x = self.connecting[k].apply(x);
        }
        x
    }

    pub fn project_subgroup(&self, from: usize, to: usize, s: &Subgroup) -> Subgroup {
        let target = &self.levels[to];
        Subgroup::generated(
            target,
            s.generators()
                .into_iter()
                .map(|x| self.project(from, to, x)),
        )
    }
}

/// One endomorphism per level with every square `π_k ∘ φ_{k+1} = φ_k ∘ π_k`
/// commuting.
#[derive(Clone, Debug)]
pub struct CoherentEndoFamily {
    endos: Vec<Endomorphism>,
}

impl CoherentEndoFamily {
    pub fn new(tower: &Tower, endos: Vec<Endomorphism>) -> Result<Self> {
        if endos.len() != tower.depth() {
            return Err(Error::ParamOutOfRange(
                "need one endomorphism per level".into(),
            ));
        }
        for (k, f) in endos.iter().enumerate() {
            if !crate::group::same_group(f.group(), tower.level(k)) {
                return Err(Error::DomainMismatch);
            }
        }
        for (k, pi) in tower.connecting().iter().enumerate() {
            let upper = tower.level(k + 1);
            if let Some(x) = upper
                .elements()
                .find(|&x| pi.apply(endos[k + 1].apply(x)) != endos[k].apply(pi.apply(x)))
            {
                return Err(Error::CoherenceViolation {
                    level: k,
                    element: x,
                });
            }
        }
        Ok(Self { endos })
    }

    pub fn identity(tower: &Tower) -> Self {
        Self {
            endos: tower.levels().iter().map(Endomorphism::identity).collect(),
        }
    }

    pub fn endos(&self) -> &[Endomorphism] {
        &self.endos
    }

    pub fn at(&self, k: usize) -> &Endomorphism {
        &self.endos[k]
    }
}

/// Shipped tower builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerKind {
    /// `Z/p^k` with multiplication by `p`.
    Zp(u64),
    /// `(Z/p^k)^n` with multiplication by `p` in every coordinate.
    Zpn(u64, usize),
    /// `Z/p^k ⋊ U(p^k)` with `(a, u) ↦ (pa, u)`.
    UnitsSemidirect(u64),
    Product(Box<TowerKind>, Box<TowerKind>),
    /// `S3 × Z/2^k` with `(s, x) ↦ (1, 2x)`; the limit map is not injective.
    S3TimesZ2,
    Trivial,
    /// Constant `S3` with the trivial endomorphism.
    ConstantS3,
}

impl fmt::Display for TowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerKind::Zp(p) => write!(f, "zp({p})"),
            TowerKind::Zpn(p, n) => write!(f, "zpn({p}, {n})"),
            TowerKind::UnitsSemidirect(p) => write!(f, "units_semidirect({p})"),
            TowerKind::Product(a, b) => write!(f, "product({a}, {b})"),
            TowerKind::S3TimesZ2 => write!(f, "s3_times_z2()"),
            TowerKind::Trivial => write!(f, "trivial()"),
            TowerKind::ConstantS3 => write!(f, "constant_s3()"),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if crate::group::is_prime(p) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{p} is not prime")))
    }
}

fn pow_usize(p: u64, k: usize) -> Result<usize> {
    p.checked_pow(k as u32)
        .map(|v| v as usize)
        .ok_or_else(|| Error::ParamOutOfRange("p^k overflows".into()))
}

fn product_tower(
    a: (Tower, CoherentEndoFamily),
    b: (Tower, CoherentEndoFamily),
    label: String,
) -> Result<(Tower, CoherentEndoFamily)> {
    let (ta, fa) = a;
    let (tb, fb) = b;
    let d = ta.depth();
    let levels: Vec<Arc<FiniteGroup>> = (0..d)
        .map(|k| direct_product(ta.level(k), tb.level(k)))
        .collect::<Result<_>>()?;
    let mut connecting = Vec::new();
    for k in 0..d - 1 {
        let (upper_r, lower_r) = (tb.level(k + 1).order(), tb.level(k).order());
        let (pa, pb) = (&ta.connecting()[k], &tb.connecting()[k]);
        let map = levels[k + 1]
            .elements()
            .map(|x| (pa.apply(x / upper_r) * lower_r + pb.apply(x % upper_r)) as u32)
            .collect();
        connecting.push(GroupHom::new_unchecked(&levels[k + 1], &levels[k], map));
    }
    let endos = (0..d)
        .map(|k| {
            let r = tb.level(k).order();
            let map = levels[k]
                .elements()
                .map(|x| (fa.at(k).apply(x / r) * r + fb.at(k).apply(x % r)) as u32)
                .collect();
            Endomorphism::new_unchecked(&levels[k], map)
        })
        .collect();
    let tower = Tower::new(levels, connecting, label)?;
    let family = CoherentEndoFamily::new(&tower, endos)?;
    Ok((tower, family))
}

/// Builds the tower of the given kind to `depth` levels, validating every
/// connecting map and coherence square.
pub fn build_tower(kind: &TowerKind, depth: usize) -> Result<(Tower, CoherentEndoFamily)> {
    if depth == 0 {
        return Err(Error::ParamOutOfRange("depth must be at least 1".into()));
    }
    let label = format!("{kind} depth {depth}");
    match kind {
        TowerKind::Zp(p) => {
            check_prime(*p)?;
            let p = *p;
            let levels: Vec<_> = (1..=depth)
                .map(|k| cyclic(pow_usize(p, k)?))
                .collect::<Result<_>>()?;
            let connecting = (0..depth - 1)
                .map(|k| {
                    let n = levels[k].order();
                    GroupHom::new_unchecked(
                        &levels[k + 1],
                        &levels[k],
                        levels[k + 1].elements().map(|x| (x % n) as u32).collect(),
                    )
                })
                .collect();
            let endos = levels
                .iter()
                .map(|g| {
                    Endomorphism::new_unchecked(
                        g,
                        g.elements()
                            .map(|x| (x * p as usize % g.order()) as u32)
                            .collect(),
                    )
                })
                .collect();
            let tower = Tower::new(levels, connecting, label)?;
            let family = CoherentEndoFamily::new(&tower, endos)?;
            Ok((tower, family))
        }
        TowerKind::Zpn(p, n) => {
            if *n == 0 {
                return Err(Error::ParamOutOfRange(
                    "zpn needs at least one coordinate".into(),
                ));
            }
            let mut acc = build_tower(&TowerKind::Zp(*p), depth)?;
            for _ in 1..*n {
                acc = product_tower(acc, build_tower(&TowerKind::Zp(*p), depth)?, label.clone())?;
            }
            acc.0.label = label;
            Ok(acc)
        }
        TowerKind::UnitsSemidirect(p) => {
            check_prime(*p)?;
            let p = *p;
            let levels: Vec<_> = (1..=depth as u32)
                .map(|k| units_semidirect_level(p, k))
                .collect::<Result<_>>()?;
            let parts = |g: &FiniteGroup| match g.structure() {
                Structure::Semidirect {
                    normal, complement, ..
                } => (normal.order(), complement.clone()),
                _ => unreachable!("levels are semidirect"),
            };
            let mut connecting = Vec::new();
            for k in 0..depth - 1 {
                let (_, u_hi) = parts(&levels[k + 1]);
                let (n_lo, u_lo) = parts(&levels[k]);
                let (Structure::Units { residues: hi, .. }, Structure::Units { residues: lo, .. }) =
                    (u_hi.structure(), u_lo.structure())
                else {
                    unreachable!("unit groups")
                };
                let (r_hi, r_lo) = (hi.len(), lo.len());
                let unit_map: Vec<usize> = hi
                    .iter()
                    .map(|&u| {
                        lo.binary_search(&(u % n_lo as u64))
                            .expect("unit reduces to unit")
                    })
                    .collect();
                let map = levels[k + 1]
                    .elements()
                    .map(|x| ((x / r_hi % n_lo) * r_lo + unit_map[x % r_hi]) as u32)
                    .collect();
                connecting.push(GroupHom::new_unchecked(&levels[k + 1], &levels[k], map));
            }
            let endos = levels
                .iter()
                .map(|g| {
                    let (n, u) = parts(g);
                    let r = u.order();
                    Endomorphism::new_unchecked(
                        g,
                        g.elements()
                            .map(|x| ((x / r * p as usize % n) * r + x % r) as u32)
                            .collect(),
                    )
                })
                .collect();
            let tower = Tower::new(levels, connecting, label)?;
            let family = CoherentEndoFamily::new(&tower, endos)?;
            Ok((tower, family))
        }
        TowerKind::Product(a, b) => {
            product_tower(build_tower(a, depth)?, build_tower(b, depth)?, label)
        }
        TowerKind::S3TimesZ2 => {
            let mut t = product_tower(
                build_tower(&TowerKind::ConstantS3, depth)?,
                build_tower(&TowerKind::Zp(2), depth)?,
                label.clone(),
            )?;
            t.0.label = label;
            Ok(t)
        }
        TowerKind::ConstantS3 => constant(symmetric(3)?, depth, label, false),
        TowerKind::Trivial => constant(cyclic(1)?, depth, label, true),
    }
}

fn constant(
    g: Arc<FiniteGroup>,
    depth: usize,
    label: String,
    identity: bool,
) -> Result<(Tower, CoherentEndoFamily)> {
    let levels = vec![g; depth];
    let connecting = (0..depth - 1)
        .map(|k| {
            GroupHom::new_unchecked(
                &levels[k + 1],
                &levels[k],
                levels[k].elements().map(|x| x as u32).collect(),
            )
        })
        .collect();
    let endos = levels
        .iter()
        .map(|g| {
            if identity {
                Endomorphism::identity(g)
            } else {
                Endomorphism::trivial(g)
            }
        })
        .collect();
    let tower = Tower::new(levels, connecting, label)?;
    let family = CoherentEndoFamily::new(&tower, endos)?;
    Ok((tower, family))
}

/// Depth-qualified injectivity and openness of the limit map.
#[derive(Clone, Debug)]
pub struct LimitDiagnostics {
    /// Every level below the top has its kernel projections vanish.
    pub limit_injective: bool,
    /// Number of levels at which vanishing was observed.
    pub verified_depth: usize,
    /// First level (0-based) whose projected kernels never vanish, with the
    /// projection from the top level.
    pub witness: Option<(usize, Vec<usize>)>,
    pub image_indices: Vec<usize>,
    pub image_open: bool,
    pub index_bound: usize,
}

pub fn limit_diagnostics(tower: &Tower, family: &CoherentEndoFamily) -> LimitDiagnostics {
    let d = tower.depth();
    let kernels: Vec<Subgroup> = family.endos().iter().map(|f| f.kernel()).collect();
    let mut verified_depth = 0;
    let mut witness = None;
    if d == 1 {
        if kernels[0].is_trivial() {
            verified_depth = 1;
        } else {
            witness = Some((0, kernels[0].elements()));
        }
    }
    for k in 0..d.saturating_sub(1) {
        let vanished = (k + 1..d).any(|j| tower.project_subgroup(j, k, &kernels[j]).is_trivial());
        if vanished {
            verified_depth += 1;
        } else if witness.is_none() {
            witness = Some((
                k,
                tower.project_subgroup(d - 1, k, &kernels[d - 1]).elements(),
            ));
        }
    }
    let image_indices: Vec<usize> = family.endos().iter().map(|f| f.image().index()).collect();
    let image_open = d == 1 || image_indices[d - 1] == image_indices[d - 2];
    LimitDiagnostics {
        limit_injective: witness.is_none(),
        verified_depth,
        witness,
        index_bound: image_indices.iter().copied().max().unwrap_or(1),
        image_indices,
        image_open,
    }
}

/// How `Con` and the stable image at level `k + 1` project onto level `k`.
#[derive(Clone, Debug)]
pub struct ConCoherence {
    pub projection_inclusion: bool,
    pub projection_equality: bool,
    pub stable_projection_equality: bool,
}

#[derive(Clone, Debug)]
pub struct TowerReport {
    pub levels: Vec<TheoremAReport>,
    pub coherence: Vec<ConCoherence>,
    pub limit: LimitDiagnostics,
}

impl TowerReport {
    /// Theorem A at every level and the inclusion at every adjacent pair.
    pub fn passed(&self) -> bool {
        self.levels.iter().all(TheoremAReport::passed)
            && self.coherence.iter().all(|c| c.projection_inclusion)
    }
}

pub fn levelwise_contraction(tower: &Tower, family: &CoherentEndoFamily) -> TowerReport {
    let levels: Vec<TheoremAReport> = family.endos().par_iter().map(verify_theorem_a).collect();
    let coherence = (0..tower.depth().saturating_sub(1))
        .map(|k| {
            let con_up = tower.project_subgroup(k + 1, k, &levels[k + 1].contraction.con);
            let stable_up =
                tower.project_subgroup(k + 1, k, &levels[k + 1].contraction.stable_image);
            let con = &levels[k].contraction.con;
            ConCoherence {
                projection_inclusion: con_up.is_subgroup_of(con),
                projection_equality: con_up == *con,
                stable_projection_equality: stable_up == levels[k].contraction.stable_image,
            }
        })
        .collect();
    TowerReport {
        levels,
        coherence,
        limit: limit_diagnostics(tower, family),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremBStatus {
    Pass,
    Fail,
    HypothesesNotMet,
}

#[derive(Clone, Debug)]
pub struct TheoremBLevel {
    pub o_lambda_order: usize,
    pub order: usize,
    pub nilpotent: bool,
    pub class: Option<usize>,
    /// Some iterate of `φ_k` has trivial image.
    pub images_vanish: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremBReport {
    pub status: TheoremBStatus,
    pub limit: LimitDiagnostics,
    pub levels: Vec<TheoremBLevel>,
    /// Nilpotency at every level; `None` when the hypotheses fail.
    pub part_i: Option<bool>,
    /// `G_k = O_Λ(G_k)` at every level; `None` when not applicable.
    pub part_ii: Option<bool>,
}

pub fn verify_theorem_b_tower(
    tower: &Tower,
    family: &CoherentEndoFamily,
) -> Result<TheoremBReport> {
    let limit = limit_diagnostics(tower, family);
    let levels: Vec<TheoremBLevel> = family
        .endos()
        .par_iter()
        .map(|f| {
            let o = o_lambda(&EndoSemigroup::single(f))?;
            Ok(TheoremBLevel {
                o_lambda_order: o.subgroup.size(),
                order: f.group().order(),
                nilpotent: o.nilpotent,
                class: o.class,
                images_vanish: crate::endo::contraction(f).stable_image.is_trivial(),
            })
        })
        .collect::<Result<_>>()?;
    if !(limit.limit_injective && limit.image_open) {
        return Ok(TheoremBReport {
            status: TheoremBStatus::HypothesesNotMet,
            limit,
            levels,
            part_i: None,
            part_ii: None,
        });
    }
    let part_i = levels.iter().all(|l| l.nilpotent);
    let part_ii = levels
        .iter()
        .all(|l| l.images_vanish)
        .then(|| levels.iter().all(|l| l.o_lambda_order == l.order));
    let ok = part_i && part_ii.unwrap_or(true);
    Ok(TheoremBReport {
        status: if ok {
            TheoremBStatus::Pass
        } else {
            TheoremBStatus::Fail
        },
        limit,
        levels,
        part_i: Some(part_i),
        part_ii,
    })
}

#[derive(Clone, Debug)]
pub struct TypeFProfile {
    pub profiles: Vec<CountProfile>,
    pub stabilized: bool,
}

/// Counts of subgroups of each index up to `n` at every level.
pub fn typef_profile(tower: &Tower, n: usize) -> Result<TypeFProfile> {
    typef_profile_with_budget(tower, n, DEFAULT_NODE_BUDGET)
}

pub fn typef_profile_with_budget(tower: &Tower, n: usize, budget: usize) -> Result<TypeFProfile> {
    let profiles: Vec<CountProfile> = tower
        .levels()
        .par_iter()
        .map(|g| count_profile_with_budget(g, n, budget))
        .collect();
    if profiles.iter().any(|p| !p.complete) {
        return Err(Error::SearchBudgetExceeded { budget });
    }
    let d = profiles.len();
    let stabilized =
        d == 1 || (1..=n).all(|i| profiles[d - 1].counts.get(&i) == profiles[d - 2].counts.get(&i));
    Ok(TypeFProfile {
        profiles,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(t: &Tower) -> Vec<usize> {
        t.levels().iter().map(|g| g.order()).collect()
    }

    #[test]
    fn builder_orders() {
        let (t, _) = build_tower(&TowerKind::Zp(2), 4).unwrap();
        assert_eq!(orders(&t), vec![2, 4, 8, 16]);
        let (t, _) = build_tower(&TowerKind::UnitsSemidirect(3), 3).unwrap();
        assert_eq!(orders(&t), vec![6, 54, 486]);
        let (t, _) = build_tower(&TowerKind::S3TimesZ2, 3).unwrap();
        assert_eq!(orders(&t), vec![12, 24, 48]);
        let (t, _) = build_tower(&TowerKind::Zpn(2, 2), 3).unwrap();
        assert_eq!(orders(&t), vec![4, 16, 64]);
        assert!(build_tower(&TowerKind::Zp(4), 2).is_err());
        assert!(build_tower(&TowerKind::Zp(2), 0).is_err());
    }

    #[test]
    fn incoherent_family_rejected() {
        let (t, _) = build_tower(&TowerKind::Zp(3), 2).unwrap();
        // x -> 2x at level 1 but x -> 4x at level 2 reduces to x -> x
        let endos = vec![
            Endomorphism::new(t.level(0), vec![0, 2, 1]).unwrap(),
            Endomorphism::new(t.level(1), (0..9).map(|x| 4 * x % 9).collect()).unwrap(),
        ];
        assert!(matches!(
            CoherentEndoFamily::new(&t, endos),
            Err(Error::CoherenceViolation {
                level: 0,
                element: 1
            })
        ));
    }

    #[test]
    fn limit_examples() {
        let (t, f) = build_tower(&TowerKind::Zp(2), 4).unwrap();
        let l = limit_diagnostics(&t, &f);
        assert!(l.limit_injective && l.image_open);
        assert_eq!(l.image_indices, vec![2, 2, 2, 2]);
        assert_eq!(l.verified_depth, 3);

        let (t, f) = build_tower(&TowerKind::UnitsSemidirect(3), 3).unwrap();
        let l = limit_diagnostics(&t, &f);
        assert!(l.limit_injective && l.image_open);
        assert_eq!(l.image_indices, vec![3, 3, 3]);

        let (t, f) = build_tower(&TowerKind::S3TimesZ2, 3).unwrap();
        let l = limit_diagnostics(&t, &f);
        assert!(!l.limit_injective);
        let (level, w) = l.witness.unwrap();
        assert_eq!(level, 0);
        assert!(w.len() >= 6);
    }

    #[test]
    fn levelwise_units_semidirect() {
        let (t, f) = build_tower(&TowerKind::UnitsSemidirect(3), 3).unwrap();
        let r = levelwise_contraction(&t, &f);
        assert!(r.passed());
        for (k, lvl) in r.levels.iter().enumerate() {
            let pk = 3usize.pow(k as u32 + 1);
            assert_eq!(lvl.contraction.con.size(), pk);
            assert_eq!(lvl.contraction.stable_image.size(), 2 * pk / 3);
        }
        assert!(r
            .coherence
            .iter()
            .all(|c| c.projection_equality && c.stable_projection_equality));
    }

    #[test]
    fn identity_family_has_trivial_con() {
        let (t, _) = build_tower(&TowerKind::UnitsSemidirect(2), 3).unwrap();
        let r = levelwise_contraction(&t, &CoherentEndoFamily::identity(&t));
        assert!(r.levels.iter().all(|l| l.contraction.con.is_trivial()));
    }

    #[test]
    fn theorem_b_examples() {
        let (t, f) = build_tower(&TowerKind::Zp(2), 4).unwrap();
        let b = verify_theorem_b_tower(&t, &f).unwrap();
        assert_eq!(b.status, TheoremBStatus::Pass);
        assert_eq!((b.part_i, b.part_ii), (Some(true), Some(true)));

        let (t, f) = build_tower(&TowerKind::UnitsSemidirect(3), 3).unwrap();
        let b = verify_theorem_b_tower(&t, &f).unwrap();
        assert_eq!(b.status, TheoremBStatus::Pass);
        assert_eq!((b.part_i, b.part_ii), (Some(true), None));

        let (t, f) = build_tower(&TowerKind::S3TimesZ2, 3).unwrap();
        let b = verify_theorem_b_tower(&t, &f).unwrap();
        assert_eq!(b.status, TheoremBStatus::HypothesesNotMet);
        assert!(b.part_i.is_none());
        assert!(b.levels.iter().all(|l| !l.nilpotent));
    }

    #[test]
    fn typef_examples() {
        let (t, _) = build_tower(&TowerKind::Zp(2), 4).unwrap();
        let p = typef_profile(&t, 2).unwrap();
        assert!(p.stabilized);
        assert!(p.profiles.iter().all(|c| c.counts.get(&2) == Some(&1)));
        let (t, _) = build_tower(&TowerKind::Zpn(2, 2), 3).unwrap();
        let p = typef_profile(&t, 2).unwrap();
        assert!(p.stabilized);
        assert!(p.profiles.iter().all(|c| c.counts.get(&2) == Some(&3)));
        let (t, _) = build_tower(&TowerKind::Trivial, 1).unwrap();
        let p = typef_profile(&t, 2).unwrap();
        assert!(p.stabilized);
        assert_eq!(
            p.profiles[0]
                .counts
                .iter()
                .map(|(&k, &v)| (k, v))
                .collect::<Vec<_>>(),
            vec![(1, 1)]
        );
    }
}
