use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::Status;
use crate::catalog::shipped_endos;
use crate::check::CheckRecord;
use crate::dsl::{AnalysisKind, Operand, Request, Resolved};
use crate::endo::{
    fewprimes_check, hom_search_with_budget, lambdareslem_check, normend_check, o_lambda,
    semigroup_contraction, shrinkind_check, tfrelstab_ii_check, verify_regulation, verify_splitthm,
    verify_theorem_a, ContractionPath, EndoSemigroup, DEFAULT_SEARCH_BUDGET,
};
use crate::group::{Endomorphism, FiniteGroup, Subgroup};
use crate::lattice::{enumerate_subgroups_with_budget, o_pi, AutoSet, DEFAULT_NODE_BUDGET};
use crate::tower::{
    levelwise_contraction, typef_profile_with_budget, verify_theorem_b_tower, TheoremBStatus,
};
use crate::{Error, Result};

pub(super) type Details = BTreeMap<String, Value>;

pub(super) struct Ctx {
    pub seed: u64,
    pub node_budget: Option<usize>,
}

/// Draws per `shrinkind(G)` request unless a count is given.
pub const DEFAULT_SHRINKIND_SAMPLES: usize = 1000;
const FEWPRIMES_EMBEDDINGS: usize = 64;

fn failed(checks: &CheckRecord) -> Value {
    json!(checks
        .failures()
        .map(|c| c.name.clone())
        .collect::<Vec<_>>())
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn int(op: &Operand) -> usize {
    match op {
        Operand::Int(n) => *n as usize,
        _ => unreachable!("signature checked during validation"),
    }
}

fn primes(ops: &[Operand]) -> Vec<u64> {
    ops.iter().map(|o| int(o) as u64).collect()
}

struct Env<'a> {
    res: &'a Resolved,
}

impl Env<'_> {
    fn group(&self, op: &Operand) -> &Arc<FiniteGroup> {
        match op {
            Operand::Group(n) => &self.res.groups[n].group,
            _ => unreachable!("signature checked during validation"),
        }
    }

    fn endo(&self, op: &Operand) -> &Endomorphism {
        match op {
            Operand::Endo(n) => &self.res.endos[n].endo,
            _ => unreachable!("signature checked during validation"),
        }
    }

    /// An endomorphism operand as a one-generator semigroup.
    fn semigroup(&self, op: &Operand) -> EndoSemigroup {
        match op {
            Operand::Endo(n) => EndoSemigroup::single(&self.res.endos[n].endo),
            Operand::Semigroup(n) => self.res.semigroups[n].semigroup.clone(),
            _ => unreachable!("signature checked during validation"),
        }
    }

    fn autos(&self, op: &Operand, parent: &Arc<FiniteGroup>) -> Result<AutoSet> {
        match op {
            Operand::None => Ok(AutoSet::empty(parent)),
            other => AutoSet::new(parent, self.semigroup(other).generators().iter().cloned()),
        }
    }

    /// The subgroup a `subgroup(...)` operand denotes inside its parent.
    fn subgroup(&self, op: &Operand) -> &Subgroup {
        match op {
            Operand::Group(n) => {
                &self.res.groups[n]
                    .subgroup_of
                    .as_ref()
                    .expect("checked during validation")
                    .1
            }
            _ => unreachable!("signature checked during validation"),
        }
    }
}

/// Runs one request; errors from the analysis itself become statuses.
pub(super) fn run_request(
    res: &Resolved,
    req: &Request,
    index: usize,
    ctx: &Ctx,
) -> (Status, Details) {
    let env = Env { res };
    let mut details = Details::new();
    match dispatch(&env, req, index, ctx, &mut details) {
        Ok(status) => (status, details),
        Err(e) => {
            details.insert("error".into(), json!(e.to_string()));
            let status = match e {
                Error::SearchBudgetExceeded { .. } => Status::BudgetExceeded,
                Error::PreconditionPrimes { .. }
                | Error::NotInvariant(_)
                | Error::NotSurjectiveOnH(_) => Status::HypothesesNotMet,
                _ => Status::Skipped,
            };
            (status, details)
        }
    }
}

fn dispatch(env: &Env, req: &Request, index: usize, ctx: &Ctx, d: &mut Details) -> Result<Status> {
    let ops = req.operands.as_slice();
    let mut put = |k: &str, v: Value| {
        d.insert(k.to_string(), v);
    };
    match req.kind {
        AnalysisKind::TheoremA => match &ops[0] {
            Operand::Tower(name) => {
                let t = &env.res.towers[name];
                let r = levelwise_contraction(&t.tower, &t.family);
                put(
                    "orders",
                    json!(t
                        .tower
                        .levels()
                        .iter()
                        .map(|g| g.order())
                        .collect::<Vec<_>>()),
                );
                put(
                    "con",
                    json!(r
                        .levels
                        .iter()
                        .map(|l| l.contraction.con.size())
                        .collect::<Vec<_>>()),
                );
                put(
                    "stable_image",
                    json!(r
                        .levels
                        .iter()
                        .map(|l| l.contraction.stable_image.size())
                        .collect::<Vec<_>>()),
                );
                put(
                    "depths",
                    json!(r
                        .levels
                        .iter()
                        .map(|l| l.contraction.depth)
                        .collect::<Vec<_>>()),
                );
                put(
                    "projection_inclusion",
                    json!(r
                        .coherence
                        .iter()
                        .map(|c| c.projection_inclusion)
                        .collect::<Vec<_>>()),
                );
                put(
                    "projection_equality",
                    json!(r
                        .coherence
                        .iter()
                        .map(|c| c.projection_equality)
                        .collect::<Vec<_>>()),
                );
                let bad: Vec<Value> = r
                    .levels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| !l.passed())
                    .map(|(k, l)| json!({"level": k + 1, "failed": failed(&l.checks)}))
                    .collect();
                if !bad.is_empty() {
                    put("failed", Value::Array(bad));
                }
                Ok(status_of(r.passed()))
            }
            op => {
                let r = verify_theorem_a(env.endo(op));
                put("order", json!(env.endo(op).group().order()));
                put("con", json!(r.contraction.con.size()));
                put("stable_image", json!(r.contraction.stable_image.size()));
                put("depth", json!(r.contraction.depth));
                put("checks", json!(r.checks.len()));
                if !r.passed() {
                    put("failed", failed(&r.checks));
                }
                Ok(status_of(r.passed()))
            }
        },
        AnalysisKind::Contraction => {
            let lam = env.semigroup(&ops[0]);
            let k = ops.get(1).map(|op| env.subgroup(op));
            let r = semigroup_contraction(&lam, k)?;
            put("order", json!(lam.parent().order()));
            put("relative_to", json!(k.map_or(1, Subgroup::size)));
            put("con", json!(r.report.con.size()));
            put("stable_image", json!(r.report.stable_image.size()));
            put("depth", json!(r.report.depth));
            put(
                "path",
                json!(match r.path {
                    ContractionPath::Tail => "tail",
                    ContractionPath::Monoid => "monoid",
                }),
            );
            if let Some(m) = r.monoid_size {
                put("monoid_size", json!(m));
            }
            if !r.report.checks.passed() {
                put("failed", failed(&r.report.checks));
            }
            Ok(status_of(r.report.checks.passed()))
        }
        AnalysisKind::Splitthm => {
            let lam = env.semigroup(&ops[0]);
            let r = verify_splitthm(&lam)?;
            put("order", json!(lam.parent().order()));
            put("generators", json!(lam.generators().len()));
            put("con", json!(r.contraction.report.con.size()));
            put(
                "stable_image",
                json!(r.contraction.report.stable_image.size()),
            );
            put("checks", json!(r.checks.len()));
            if !r.passed() {
                put("failed", failed(&r.checks));
            }
            Ok(status_of(r.passed()))
        }
        AnalysisKind::TheoremB => match &ops[0] {
            Operand::Tower(name) => {
                let t = &env.res.towers[name];
                let r = verify_theorem_b_tower(&t.tower, &t.family)?;
                put("limit_injective", json!(r.limit.limit_injective));
                put("verified_depth", json!(r.limit.verified_depth));
                put("image_indices", json!(r.limit.image_indices));
                put("image_open", json!(r.limit.image_open));
                if let Some((level, elems)) = &r.limit.witness {
                    put(
                        "kernel_witness",
                        json!({"level": level + 1, "elements": elems}),
                    );
                }
                put(
                    "o_lambda",
                    json!(r
                        .levels
                        .iter()
                        .map(|l| l.o_lambda_order)
                        .collect::<Vec<_>>()),
                );
                put(
                    "nilpotent",
                    json!(r.levels.iter().map(|l| l.nilpotent).collect::<Vec<_>>()),
                );
                put("part_i", json!(r.part_i));
                put("part_ii", json!(r.part_ii));
                Ok(match r.status {
                    TheoremBStatus::Pass => Status::Pass,
                    TheoremBStatus::Fail => Status::Fail,
                    TheoremBStatus::HypothesesNotMet => Status::HypothesesNotMet,
                })
            }
            op => {
                // on a finite group, injective endomorphisms are the only ones
                // with open image in the limit sense
                let lam = env.semigroup(op);
                let autos = lam.generators().iter().all(Endomorphism::is_automorphism);
                let r = o_lambda(&lam)?;
                put("o_lambda", json!(r.subgroup.size()));
                put("nilpotent", json!(r.nilpotent));
                put("class", json!(r.class));
                put("monoid_size", json!(r.monoid_size));
                if !autos {
                    return Ok(Status::HypothesesNotMet);
                }
                Ok(status_of(r.nilpotent))
            }
        },
        AnalysisKind::Regulation => {
            let lam = env.semigroup(&ops[0]);
            let omega = env.autos(&ops[1], lam.parent())?;
            let r = verify_regulation(&lam, &omega)?;
            put("omega", json!(omega.len()));
            put("residuals", json!(r.residuals));
            put("trivial_at", json!(r.trivial_at));
            if !r.passed() {
                put("failed", failed(&r.checks));
            }
            Ok(status_of(r.passed()))
        }
        AnalysisKind::Tfrelstab2 => {
            let lam = env.semigroup(&ops[0]);
            let omega = env.autos(&ops[1], lam.parent())?;
            let r = tfrelstab_ii_check(&lam, &omega)?;
            put("psi", json!(r.psi));
            put("xi", json!(r.xi));
            put("restricted_order", json!(r.restricted.parent().order()));
            put("residuals", json!(r.regulation.residuals));
            put("trivial_at", json!(r.regulation.trivial_at));
            if !r.passed() {
                put("failed", failed(&r.regulation.checks));
            }
            Ok(status_of(r.passed()))
        }
        AnalysisKind::Shrinkind => match ops {
            [Operand::Endo(_), k] => {
                let phi = env.endo(&ops[0]);
                let k = env.subgroup(k);
                let mut checks = shrinkind_check(phi, k)?;
                if k.is_normal() {
                    checks.extend("normend_", &normend_check(phi, k)?);
                }
                put("index", json!(k.index()));
                put("preimage_index", json!(phi.preimage(k)?.index()));
                put("checks", json!(checks.len()));
                if !checks.passed() {
                    put("failed", failed(&checks));
                }
                Ok(status_of(checks.passed()))
            }
            _ => {
                let g = env.group(&ops[0]);
                let count = ops.get(1).map_or(DEFAULT_SHRINKIND_SAMPLES, int);
                let budget = ctx.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
                let subs = enumerate_subgroups_with_budget(g, g.order(), budget);
                if !subs.complete {
                    return Err(Error::SearchBudgetExceeded { budget });
                }
                let endos = shipped_endos(g);
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ index as u64);
                let (mut violations, mut normal) = (Vec::new(), 0);
                for _ in 0..count {
                    let phi = &endos[rng.random_range(0..endos.len())];
                    let k = &subs.entries[rng.random_range(0..subs.entries.len())];
                    let mut checks = shrinkind_check(phi, k)?;
                    if k.is_normal() {
                        normal += 1;
                        checks.extend("normend_", &normend_check(phi, k)?);
                    }
                    if !checks.passed() && violations.len() < 5 {
                        violations.push(json!({"k": k.elements(), "failed": failed(&checks)}));
                    }
                }
                put("samples", json!(count));
                put("endomorphisms", json!(endos.len()));
                put("subgroups", json!(subs.entries.len()));
                put("normal_samples", json!(normal));
                let ok = violations.is_empty();
                if !ok {
                    put("violations", Value::Array(violations));
                }
                Ok(status_of(ok))
            }
        },
        AnalysisKind::OPi => {
            let ps = primes(&ops[1..]);
            let g = env.group(&ops[0]);
            put("o_pi", json!(o_pi(g, &ps)?.size()));
            if let Operand::Group(name) = &ops[0] {
                if let Some((_, sub)) = &env.res.groups[name].subgroup_of {
                    let r = lambdareslem_check(sub, &ps)?;
                    put("o_pi_parent", json!(o_pi(sub.parent(), &ps)?.size()));
                    if !r.passed() {
                        put("failed", failed(&r));
                    }
                    return Ok(status_of(r.passed()));
                }
            }
            // every subgroup whose core index is a π-number
            let budget = ctx.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let subs = enumerate_subgroups_with_budget(g, g.order(), budget);
            if !subs.complete {
                return Err(Error::SearchBudgetExceeded { budget });
            }
            let (mut checked, mut bad) = (0, Vec::new());
            for h in &subs.entries {
                match lambdareslem_check(h, &ps) {
                    Ok(r) => {
                        checked += 1;
                        if !r.passed() {
                            bad.push(json!(h.elements()));
                        }
                    }
                    Err(Error::PreconditionPrimes { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            put("subgroups", json!(subs.entries.len()));
            put("qualifying", json!(checked));
            let ok = bad.is_empty();
            if !ok {
                bad.truncate(5);
                put("violations", Value::Array(bad));
            }
            Ok(status_of(ok))
        }
        AnalysisKind::Fewprimes => {
            let (g, h) = (env.group(&ops[0]), env.group(&ops[1]));
            let ps = primes(&ops[2..]);
            let budget = ctx.node_budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
            let search =
                hom_search_with_budget(g, &Subgroup::whole(h), FEWPRIMES_EMBEDDINGS, budget)?;
            let (mut qualifying, mut bad) = (0, Vec::new());
            for phi in &search.witnesses {
                match fewprimes_check(phi, &ps) {
                    Ok(r) => {
                        qualifying += 1;
                        if !r.passed() && bad.len() < 5 {
                            bad.push(json!({"map": phi.map_vec(), "failed": failed(&r.checks)}));
                        }
                    }
                    Err(Error::PreconditionPrimes { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            put("embeddings", json!(search.count));
            put("examined", json!(search.witnesses.len()));
            put("qualifying", json!(qualifying));
            if qualifying == 0 {
                return Ok(Status::HypothesesNotMet);
            }
            let ok = bad.is_empty();
            if !ok {
                put("violations", Value::Array(bad));
            }
            Ok(status_of(ok))
        }
        AnalysisKind::HomSearch => {
            let g = env.group(&ops[0]);
            let cap = ops.get(2).map_or(1, int);
            let h = match &ops[1] {
                Operand::Group(n) => match &env.res.groups[n].subgroup_of {
                    Some((_, sub)) if sub.parent() == g => sub.clone(),
                    _ => Subgroup::whole(env.group(&ops[1])),
                },
                _ => unreachable!("signature checked during validation"),
            };
            let budget = ctx.node_budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
            let r = hom_search_with_budget(g, &h, cap, budget)?;
            put("injective_homs", json!(r.count));
            put("nodes", json!(r.nodes));
            if let Some(w) = r.witnesses.first() {
                put("example", json!(w.map_vec()));
            }
            let inside = h.parent() == g;
            if r.count > 0 || !inside {
                return Ok(Status::Pass);
            }
            match &r.simple_witness {
                Some(w) => {
                    put("k", json!(w.k.elements()));
                    put("k_order", json!(w.k.size()));
                    put("quotient_simple", json!(w.quotient_simple));
                    put("injective_into_k", json!(w.injective_into_k));
                    Ok(status_of(w.quotient_simple && w.injective_into_k == 0))
                }
                None => {
                    put("k", Value::Null);
                    Ok(Status::Fail)
                }
            }
        }
        AnalysisKind::TypeF => {
            let Operand::Tower(name) = &ops[0] else {
                unreachable!("signature checked during validation")
            };
            let n = ops.get(1).map_or(2, int);
            let t = &env.res.towers[name];
            let budget = ctx.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let r = typef_profile_with_budget(&t.tower, n, budget)?;
            put("n", json!(n));
            put(
                "profiles",
                json!(r.profiles.iter().map(|p| &p.counts).collect::<Vec<_>>()),
            );
            put("stabilized", json!(r.stabilized));
            Ok(Status::Pass)
        }
    }
}
