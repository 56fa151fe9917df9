use std::collections::HashMap;
use std::sync::Arc;

use super::contraction::{contraction, ContractionReport};
use crate::check::CheckRecord;
use crate::group::{nilpotency, same_group, Endomorphism, FiniteGroup, Subgroup};
use crate::mask::Mask;
use crate::{Error, Result};

/// Largest transformation monoid enumerated literally.
pub const MONOID_CAP: usize = 4096;

/// A finitely generated semigroup of endomorphisms of one group.
#[derive(Clone, Debug)]
pub struct EndoSemigroup {
    parent: Arc<FiniteGroup>,
    generators: Vec<Endomorphism>,
    commutative: bool,
}

impl EndoSemigroup {
    pub fn new(parent: &Arc<FiniteGroup>, generators: Vec<Endomorphism>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::ParamOutOfRange(
                "a semigroup needs at least one generator".into(),
            ));
        }
        if generators.iter().any(|g| !same_group(g.group(), parent)) {
            return Err(Error::DifferentParents);
        }
        let mut s = Self {
            parent: parent.clone(),
            generators,
            commutative: false,
        };
        s.commutative = s.noncommuting_pair().is_none();
        Ok(s)
    }

    pub fn single(phi: &Endomorphism) -> Self {
        Self {
            parent: phi.group().clone(),
            generators: vec![phi.clone()],
            commutative: true,
        }
    }

    /// Like [`EndoSemigroup::new`] but fails with `NonCommutative` on the
    /// first pair of generators that do not commute.
    pub fn commutative(parent: &Arc<FiniteGroup>, generators: Vec<Endomorphism>) -> Result<Self> {
        let s = Self::new(parent, generators)?;
        match s.noncommuting_pair() {
            Some((left, right)) => Err(Error::NonCommutative { left, right }),
            None => Ok(s),
        }
    }

    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let r = self.generators.len();
        (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .find(|&(i, j)| !self.generators[i].commutes_with(&self.generators[j]))
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn generators(&self) -> &[Endomorphism] {
        &self.generators
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// The product of all generators.
    pub fn tail(&self) -> Endomorphism {
        let mut t = self.generators[0].clone();
        for g in &self.generators[1..] {
            t = t.then_endo(g).expect("same parent");
        }
        t
    }

    /// All distinct maps in the monoid generated by the generators and the
    /// identity, in discovery order, or `None` past `cap` elements.
    pub fn monoid(&self, cap: usize) -> Option<Vec<Endomorphism>> {
        let id = Endomorphism::identity(&self.parent);
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        seen.insert(id.raw_map().to_vec(), 0);
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            let cur = out[head].clone();
            head += 1;
            for g in &self.generators {
                let next = cur.then_endo(g).expect("same parent");
                if !seen.contains_key(next.raw_map()) {
                    if out.len() == cap {
                        return None;
                    }
                    seen.insert(next.raw_map().to_vec(), out.len());
                    out.push(next);
                }
            }
        }
        Some(out)
    }
}

/// Which computation produced a semigroup contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionPath {
    Tail,
    Monoid,
}

#[derive(Clone, Debug)]
pub struct SemigroupContraction {
    pub report: ContractionReport,
    pub path: ContractionPath,
    pub monoid_size: Option<usize>,
}

/// Result of the literal filter computation over the full monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralContraction {
    pub con: Mask,
    pub stable_image: Mask,
    pub monoid_size: usize,
}

/// `Con(Λ, K)` and `Λ_∩(G)` straight from the definitions: intersect the
/// right ideals `Mξ` over every `ξ` in the monoid, then keep the elements
/// every surviving map sends into `K`.
pub fn literal_contraction(
    lambda: &EndoSemigroup,
    k: &Subgroup,
    cap: usize,
) -> Result<LiteralContraction> {
    let g = lambda.parent();
    if !same_group(k.parent(), g) {
        return Err(Error::DifferentParents);
    }
    let monoid = lambda
        .monoid(cap)
        .ok_or(Error::SearchBudgetExceeded { budget: cap })?;
    let index: HashMap<&[u32], usize> = monoid
        .iter()
        .enumerate()
        .map(|(i, m)| (m.raw_map(), i))
        .collect();
    let size = monoid.len();

    let mut surviving = Mask::full(size);
    let mut buf = vec![0u32; g.order()];
    for xi in &monoid {
        let mut ideal = Mask::empty(size);
        for mu in &monoid {
            for (x, slot) in buf.iter_mut().enumerate() {
                *slot = mu.raw_map()[xi.raw_map()[x] as usize];
            }
            ideal.insert(index[buf.as_slice()]);
        }
        surviving = surviving.and(&ideal);
        if surviving.is_empty() {
            break;
        }
    }

    let con = Mask::from_iter(
        g.order(),
        g.elements()
            .filter(|&x| surviving.iter().all(|s| k.contains(monoid[s].apply(x)))),
    );
    let mut stable_image = Mask::full(g.order());
    for m in &monoid {
        stable_image = stable_image.and(m.image().members());
    }
    Ok(LiteralContraction {
        con,
        stable_image,
        monoid_size: size,
    })
}

/// Largest subset of `K` that every generator maps into itself.
fn lambda_core(lambda: &EndoSemigroup, k: &Subgroup) -> Subgroup {
    let mut s = k.clone();
    loop {
        let mut next = s.clone();
        for g in lambda.generators() {
            next = next
                .intersection(&g.preimage(&s).expect("same parent"))
                .expect("same parent");
        }
        if next.size() == s.size() {
            return s;
        }
        s = next;
    }
}

/// `Con(Λ, K)` and `Λ_∩(G)` for a commutative semigroup. `K` defaults to
/// the trivial subgroup.
pub fn semigroup_contraction(
    lambda: &EndoSemigroup,
    k: Option<&Subgroup>,
) -> Result<SemigroupContraction> {
    semigroup_contraction_with(lambda, k, false)
}

/// As [`semigroup_contraction`]; with `allow_noncommutative` a
/// non-commutative semigroup is answered by the literal monoid computation
/// alone instead of being rejected.
pub fn semigroup_contraction_with(
    lambda: &EndoSemigroup,
    k: Option<&Subgroup>,
    allow_noncommutative: bool,
) -> Result<SemigroupContraction> {
    let g = lambda.parent();
    let k = match k {
        Some(k) if !same_group(k.parent(), g) => return Err(Error::DifferentParents),
        Some(k) => k.clone(),
        None => Subgroup::trivial(g),
    };
    if let Some((left, right)) = lambda.noncommuting_pair() {
        if !allow_noncommutative {
            return Err(Error::NonCommutative { left, right });
        }
        let lit = literal_contraction(lambda, &k, MONOID_CAP)?;
        let con = Subgroup::from_mask(g, lit.con)?;
        let stable_image = Subgroup::from_mask(g, lit.stable_image)?;
        let report = ContractionReport {
            kernel_chain: vec![con.clone()],
            image_chain: vec![stable_image.clone()],
            con,
            stable_image,
            depth: 0,
            checks: CheckRecord::new(),
        };
        return Ok(SemigroupContraction {
            report,
            path: ContractionPath::Monoid,
            monoid_size: Some(lit.monoid_size),
        });
    }

    let tau = lambda.tail();
    let core = lambda_core(lambda, &k);
    let mut power = Endomorphism::identity(g);
    let mut kernel_chain = vec![core.clone()];
    let mut image_chain = vec![Subgroup::whole(g)];
    loop {
        let next = power.then_endo(&tau).expect("same parent");
        let c = next.preimage(&core).expect("same parent");
        let i = next.image();
        let last = kernel_chain.len() - 1;
        if c.size() == kernel_chain[last].size() && i.size() == image_chain[last].size() {
            break;
        }
        kernel_chain.push(c);
        image_chain.push(i);
        power = next;
    }
    let depth = kernel_chain.len() - 1;
    let mut report = ContractionReport {
        con: kernel_chain[depth].clone(),
        stable_image: image_chain[depth].clone(),
        depth,
        kernel_chain,
        image_chain,
        checks: CheckRecord::new(),
    };
    report.checks.push(
        "kernel_chain_ascending",
        report
            .kernel_chain
            .windows(2)
            .all(|w| w[0].is_subgroup_of(&w[1])),
    );

    let mut path = ContractionPath::Tail;
    let mut monoid_size = None;
    if !k.is_normal() {
        match literal_contraction(lambda, &k, MONOID_CAP) {
            Ok(lit) => {
                monoid_size = Some(lit.monoid_size);
                let agrees = lit.con == *report.con.members()
                    && lit.stable_image == *report.stable_image.members();
                report.checks.push("tail_agrees_with_monoid", agrees);
                if !agrees {
                    report.con = Subgroup::from_mask(g, lit.con)?;
                    report.stable_image = Subgroup::from_mask(g, lit.stable_image)?;
                    path = ContractionPath::Monoid;
                }
            }
            Err(Error::SearchBudgetExceeded { .. }) => {
                report.checks.push_detail(
                    "tail_agrees_with_monoid",
                    true,
                    "monoid over cap, not compared",
                );
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SemigroupContraction {
        report,
        path,
        monoid_size,
    })
}

#[derive(Clone, Debug)]
pub struct SplitReport {
    pub contraction: SemigroupContraction,
    pub checks: CheckRecord,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// The decomposition `G = Con(Λ) ⋊ Λ_∩(G)` with the per-generator
/// identities, all as element-set equalities.
pub fn verify_splitthm(lambda: &EndoSemigroup) -> Result<SplitReport> {
    let sc = semigroup_contraction(lambda, None)?;
    let g = lambda.parent();
    let con = &sc.report.con;
    let cap = &sc.report.stable_image;
    let mut checks = CheckRecord::new();

    checks.push("con_normal", con.is_normal());
    checks.push("con_meet_cap_trivial", con.intersection(cap)?.is_trivial());
    for (i, lam) in lambda.generators().iter().enumerate() {
        let img = lam.image();
        checks.push(
            format!("gen_{i}_con_times_image_is_group"),
            con.product_set(&img)?.count() == g.order(),
        );
        checks.push(
            format!("gen_{i}_con_meet_image_is_image_of_con"),
            con.intersection(&img)? == lam.image_of(con)?,
        );
    }
    checks.push(
        "con_times_cap_is_group",
        con.product_set(cap)?.count() == g.order(),
    );
    for (i, lam) in lambda.generators().iter().enumerate() {
        checks.push(
            format!("gen_{i}_bijective_on_cap"),
            lam.image_of(cap)? == *cap,
        );
    }
    let tau = lambda.tail();
    let mut s = con.clone();
    loop {
        let next = tau.image_of(&s)?;
        if next.size() == s.size() {
            break;
        }
        s = next;
    }
    checks.push("cap_of_con_trivial", s.is_trivial());
    checks.extend("contraction.", &sc.report.checks);

    Ok(SplitReport {
        contraction: sc,
        checks,
    })
}

#[derive(Clone, Debug)]
pub struct OLambdaReport {
    pub subgroup: Subgroup,
    pub nilpotent: bool,
    pub class: Option<usize>,
    pub monoid_size: usize,
}

/// The subgroup generated by `Con(λ)` over every map in the monoid.
pub fn o_lambda(lambda: &EndoSemigroup) -> Result<OLambdaReport> {
    let g = lambda.parent();
    let monoid = lambda
        .monoid(MONOID_CAP)
        .ok_or(Error::SearchBudgetExceeded { budget: MONOID_CAP })?;
    let mut sub = Subgroup::trivial(g);
    for m in &monoid {
        let con = contraction(m).con;
        if !con.is_subgroup_of(&sub) {
            sub = sub.join(&con)?;
        }
    }
    let (as_group, _) = sub.as_group();
    let nil = nilpotency(&as_group);
    Ok(OLambdaReport {
        subgroup: sub,
        nilpotent: nil.is_nilpotent,
        class: nil.class,
        monoid_size: monoid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::verify_theorem_a;
    use crate::group::{cyclic, dihedral, direct_product, semidirect, units_mod, Action};

    fn z4z9() -> Arc<FiniteGroup> {
        direct_product(&cyclic(4).unwrap(), &cyclic(9).unwrap()).unwrap()
    }

    fn scale(g: &Arc<FiniteGroup>, a: usize, b: usize) -> Endomorphism {
        Endomorphism::new(
            g,
            g.elements()
                .map(|x| (x / 9 * a % 4) * 9 + x % 9 * b % 9)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_semigroup() {
        let g = cyclic(6).unwrap();
        let l = EndoSemigroup::single(&Endomorphism::identity(&g));
        let r = semigroup_contraction(&l, None).unwrap().report;
        assert!(r.con.is_trivial() && r.stable_image.is_whole());
        let lit = literal_contraction(&l, &Subgroup::trivial(&g), MONOID_CAP).unwrap();
        assert_eq!(lit.monoid_size, 1);
        assert_eq!(lit.con.count(), 1);
    }

    #[test]
    fn two_generators_annihilate() {
        let g = z4z9();
        let l = EndoSemigroup::commutative(&g, vec![scale(&g, 2, 1), scale(&g, 1, 3)]).unwrap();
        let r = semigroup_contraction(&l, None).unwrap().report;
        assert!(r.con.is_whole());
        assert!(r.stable_image.is_trivial());
        let lit = literal_contraction(&l, &Subgroup::trivial(&g), MONOID_CAP).unwrap();
        assert_eq!(lit.con, *r.con.members());
        assert_eq!(lit.stable_image, *r.stable_image.members());
        assert_eq!(lit.monoid_size, 9);
        assert!(verify_splitthm(&l).unwrap().passed());
    }

    #[test]
    fn single_generator_reduces() {
        let g = z4z9();
        let l = EndoSemigroup::single(&scale(&g, 2, 1));
        let r = semigroup_contraction(&l, None).unwrap().report;
        assert_eq!(r.con.elements(), vec![0, 9, 18, 27]);
        assert_eq!(r.stable_image.elements(), (0..9).collect::<Vec<_>>());
        let a = verify_theorem_a(&scale(&g, 2, 1));
        assert_eq!(a.contraction.con, r.con);
        assert_eq!(a.contraction.stable_image, r.stable_image);
    }

    #[test]
    fn non_commutative_rejected() {
        let g = dihedral(3).unwrap();
        let a = Endomorphism::conjugation(&g, 1);
        let b = Endomorphism::conjugation(&g, 3);
        assert!(!a.commutes_with(&b));
        let l = EndoSemigroup::new(&g, vec![a, b]).unwrap();
        assert!(!l.is_commutative());
        assert!(matches!(
            semigroup_contraction(&l, None),
            Err(Error::NonCommutative { left: 0, right: 1 })
        ));
        let forced = semigroup_contraction_with(&l, None, true).unwrap();
        assert_eq!(forced.path, ContractionPath::Monoid);
        assert!(forced.report.con.is_trivial());
    }

    #[test]
    fn non_normal_k_uses_oracle() {
        let g = dihedral(3).unwrap();
        let k = Subgroup::generated(&g, [1]);
        assert!(!k.is_normal());
        let l = EndoSemigroup::single(&Endomorphism::identity(&g));
        let r = semigroup_contraction(&l, Some(&k)).unwrap();
        assert_eq!(r.report.con, k);
        assert_eq!(r.report.checks.get("tail_agrees_with_monoid"), Some(true));
    }

    #[test]
    fn o_lambda_examples() {
        let g = semidirect(
            &cyclic(9).unwrap(),
            &units_mod(3, 2).unwrap(),
            &Action::Multiplication,
        )
        .unwrap();
        let phi = Endomorphism::new(
            &g,
            g.elements().map(|x| (x / 6 * 3 % 9) * 6 + x % 6).collect(),
        )
        .unwrap();
        let r = o_lambda(&EndoSemigroup::single(&phi)).unwrap();
        assert_eq!(r.subgroup.size(), 9);
        assert!(r.nilpotent);
        assert_eq!(r.class, Some(1));
        let t = o_lambda(&EndoSemigroup::single(&Endomorphism::identity(&g))).unwrap();
        assert!(t.subgroup.is_trivial() && t.nilpotent);
    }
}
