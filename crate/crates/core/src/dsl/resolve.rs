use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::ast::*;
use super::{DslError, Pos};
use crate::endo::{project_away, scale, scale_first, EndoSemigroup};
use crate::group::{
    alternating, cyclic, dihedral, direct_product, order_guard, parse_table_text, quaternion,
    semidirect, set_order_guard, symmetric, units_mod, Action, Endomorphism, FiniteGroup, Subgroup,
};
use crate::tower::{build_tower, CoherentEndoFamily, Tower, TowerKind};
use crate::Error;

type VResult<T> = Result<T, DslError>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioOptions {
    pub order_guard: Option<usize>,
    pub node_budget: Option<usize>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub label: Option<String>,
}

/// Where table paths resolve from, and an order guard that overrides the
/// scenario's own `set order_guard`.
#[derive(Clone, Debug, Default)]
pub struct ValidateConfig {
    pub base_dir: PathBuf,
    pub order_guard: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ResolvedGroup {
    pub group: Arc<FiniteGroup>,
    /// For `subgroup(G, ...)`: the parent's name and the subgroup inside it.
    pub subgroup_of: Option<(String, Subgroup)>,
}

#[derive(Clone, Debug)]
pub struct ResolvedEndo {
    pub group: String,
    pub endo: Endomorphism,
}

#[derive(Clone, Debug)]
pub struct ResolvedSemigroup {
    pub group: String,
    pub members: Vec<String>,
    pub semigroup: EndoSemigroup,
}

#[derive(Clone, Debug)]
pub struct ResolvedTower {
    pub kind: TowerKind,
    pub depth: usize,
    pub tower: Tower,
    pub family: CoherentEndoFamily,
}

/// A typed analysis argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Group(String),
    Endo(String),
    Semigroup(String),
    Tower(String),
    Int(i64),
    None,
}

impl Operand {
    fn letter(&self) -> char {
        match self {
            Operand::Group(_) => 'G',
            Operand::Endo(_) => 'E',
            Operand::Semigroup(_) => 'L',
            Operand::Tower(_) => 'T',
            Operand::Int(_) => 'I',
            Operand::None => 'N',
        }
    }
}

#[derive(Clone, Debug)]
pub struct Request {
    pub kind: AnalysisKind,
    /// Arguments as written, for reports.
    pub target: Vec<String>,
    /// Arguments after dropping a leading group that only restates where
    /// the following endomorphism or semigroup lives.
    pub operands: Vec<Operand>,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default)]
pub struct Resolved {
    pub options: ScenarioOptions,
    pub groups: BTreeMap<String, ResolvedGroup>,
    pub endos: BTreeMap<String, ResolvedEndo>,
    pub semigroups: BTreeMap<String, ResolvedSemigroup>,
    pub towers: BTreeMap<String, ResolvedTower>,
    pub analyses: Vec<Request>,
}

impl Resolved {
    pub fn label(&self) -> &str {
        self.options.label.as_deref().unwrap_or("")
    }

    pub fn group(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.groups.get(name).map(|g| &g.group)
    }
}

/// Signatures per analysis. `X` is an endomorphism or semigroup, `O` is an
/// endomorphism, semigroup or `none`, `S` is a group declared with
/// `subgroup(...)` inside the group of the preceding operand, and a trailing
/// `+` repeats the last letter.
fn signatures(kind: AnalysisKind) -> &'static [&'static str] {
    match kind {
        AnalysisKind::TheoremA => &["E", "T"],
        AnalysisKind::Contraction => &["X", "XS"],
        AnalysisKind::Splitthm => &["X"],
        AnalysisKind::TheoremB => &["T", "X"],
        AnalysisKind::Regulation | AnalysisKind::Tfrelstab2 => &["XO"],
        AnalysisKind::Shrinkind => &["ES", "G", "GI"],
        AnalysisKind::OPi => &["GI+"],
        AnalysisKind::Fewprimes => &["GGI+"],
        AnalysisKind::HomSearch => &["GG", "GGI"],
        AnalysisKind::TypeF => &["T", "TI"],
    }
}

fn letter_matches(pat: char, got: char) -> bool {
    match pat {
        'X' => got == 'E' || got == 'L',
        'O' => got == 'E' || got == 'L' || got == 'N',
        'S' => got == 'G',
        p => p == got,
    }
}

fn matches_signature(sig: &str, letters: &[char]) -> bool {
    let pat: Vec<char> = sig.chars().collect();
    if let Some(body) = sig.strip_suffix('+') {
        let body: Vec<char> = body.chars().collect();
        let last = *body.last().expect("non-empty signature");
        letters.len() >= body.len()
            && body
                .iter()
                .zip(letters)
                .all(|(&p, &g)| letter_matches(p, g))
            && letters[body.len()..]
                .iter()
                .all(|&g| letter_matches(last, g))
    } else {
        pat.len() == letters.len() && pat.iter().zip(letters).all(|(&p, &g)| letter_matches(p, g))
    }
}

fn describe_letter(c: char) -> &'static str {
    match c {
        'G' | 'S' => "group",
        'E' => "endo",
        'L' => "semigroup",
        'X' => "endo|semigroup",
        'O' => "endo|semigroup|none",
        'T' => "tower",
        _ => "int",
    }
}

fn describe_signature(kind: AnalysisKind) -> String {
    signatures(kind)
        .iter()
        .map(|s| {
            let (body, rep) = s.strip_suffix('+').map_or((*s, false), |b| (b, true));
            let mut parts: Vec<String> = body
                .chars()
                .map(|c| describe_letter(c).to_string())
                .collect();
            if rep {
                parts.push("...".into());
            }
            format!("{}({})", kind.name(), parts.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" or ")
}

/// Restores the process order guard when validation ends.
struct GuardScope(Option<usize>);

impl Drop for GuardScope {
    fn drop(&mut self) {
        if let Some(prev) = self.0 {
            set_order_guard(prev);
        }
    }
}

struct Resolver<'a> {
    out: Resolved,
    defined: BTreeMap<String, Pos>,
    guard: usize,
    base_dir: &'a Path,
}

fn group_err(pos: Pos) -> impl Fn(Error) -> DslError {
    move |e| match e {
        Error::OrderGuard { order, guard } => DslError::OrderGuard { order, guard, pos },
        source => DslError::Group { source, pos },
    }
}

fn invalid(pos: Pos, message: impl Into<String>) -> DslError {
    DslError::Invalid {
        message: message.into(),
        pos,
    }
}

fn units_order(p: u64, k: u32) -> u128 {
    if k == 0 {
        return 1;
    }
    (p as u128)
        .saturating_pow(k - 1)
        .saturating_mul((p as u128).saturating_sub(1))
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

fn tower_top_order(kind: &TowerKind, depth: usize) -> u128 {
    let d = depth as u32;
    match kind {
        TowerKind::Zp(p) => (*p as u128).saturating_pow(d),
        TowerKind::Zpn(p, n) => (*p as u128).saturating_pow(d.saturating_mul(*n as u32)),
        TowerKind::UnitsSemidirect(p) => (*p as u128)
            .saturating_pow(d)
            .saturating_mul(units_order(*p, d)),
        TowerKind::Product(a, b) => {
            tower_top_order(a, depth).saturating_mul(tower_top_order(b, depth))
        }
        TowerKind::S3TimesZ2 => 6u128.saturating_mul(2u128.saturating_pow(d)),
        TowerKind::Trivial => 1,
        TowerKind::ConstantS3 => 6,
    }
}

impl Resolver<'_> {
    fn check_order(&self, order: u128, pos: Pos) -> VResult<()> {
        if order > self.guard as u128 {
            Err(DslError::OrderGuard {
                order: usize::try_from(order).unwrap_or(usize::MAX),
                guard: self.guard,
                pos,
            })
        } else {
            Ok(())
        }
    }

    fn define(&mut self, name: &str, pos: Pos) -> VResult<()> {
        if let Some(&first) = self.defined.get(name) {
            return Err(DslError::DuplicateName {
                name: name.into(),
                first,
                pos,
            });
        }
        self.defined.insert(name.into(), pos);
        Ok(())
    }

    fn unresolved(&self, name: &str, want: &str, pos: Pos) -> DslError {
        let reason = if self.out.groups.contains_key(name) {
            format!("`{name}` is a group, expected {want}")
        } else if self.out.endos.contains_key(name) {
            format!("`{name}` is an endomorphism, expected {want}")
        } else if self.out.semigroups.contains_key(name) {
            format!("`{name}` is a semigroup, expected {want}")
        } else if self.out.towers.contains_key(name) {
            format!("`{name}` is a tower, expected {want}")
        } else {
            format!("no {want} named `{name}` is defined before this line")
        };
        DslError::NameUnresolved {
            name: name.into(),
            reason,
            pos,
        }
    }

    fn group(&self, name: &str, pos: Pos) -> VResult<&ResolvedGroup> {
        self.out
            .groups
            .get(name)
            .ok_or_else(|| self.unresolved(name, "group", pos))
    }

    fn endo(&self, name: &str, pos: Pos) -> VResult<&ResolvedEndo> {
        self.out
            .endos
            .get(name)
            .ok_or_else(|| self.unresolved(name, "endomorphism", pos))
    }

    fn options(&mut self, ast: &Scenario) -> VResult<()> {
        for st in &ast.statements {
            let StmtKind::Set { key, value } = &st.kind else {
                continue;
            };
            let nat = || match value {
                Value::Int(n) if *n >= 0 => Ok(*n as u64),
                _ => Err(invalid(
                    st.pos,
                    format!("`{key}` must be a non-negative integer"),
                )),
            };
            let o = &mut self.out.options;
            match key.as_str() {
                "order_guard" => {
                    let v = nat()? as usize;
                    if v == 0 {
                        return Err(invalid(st.pos, "order_guard must be positive"));
                    }
                    o.order_guard = Some(v);
                }
                "node_budget" => o.node_budget = Some(nat()? as usize),
                "jobs" => o.jobs = Some((nat()? as usize).max(1)),
                "seed" => o.seed = Some(nat()?),
                "label" => {
                    o.label = Some(match value {
                        Value::Str(s) | Value::Name(s) => s.clone(),
                        Value::Int(n) => n.to_string(),
                    })
                }
                other => return Err(invalid(st.pos, format!("unknown option `{other}`"))),
            }
        }
        Ok(())
    }

    fn expected_order(&self, e: &GroupExpr, pos: Pos) -> VResult<u128> {
        Ok(match e {
            GroupExpr::Cyclic(n) => *n as u128,
            GroupExpr::UnitsMod(p, k) => units_order(*p, *k),
            GroupExpr::Dihedral(n) => 2 * *n as u128,
            GroupExpr::Symmetric(n) => factorial(*n),
            GroupExpr::Alternating(n) => (factorial(*n) / 2).max(1),
            GroupExpr::Quaternion => 8,
            GroupExpr::Product(a, b) | GroupExpr::Semidirect(a, b, _) => self
                .expected_order(a, pos)?
                .saturating_mul(self.expected_order(b, pos)?),
            // table size is checked once the file is read
            GroupExpr::Table(_) => 0,
            GroupExpr::Subgroup(g, _) | GroupExpr::Named(g) => {
                self.group(g, pos)?.group.order() as u128
            }
        })
    }

    fn eval_word(&self, g: &FiniteGroup, w: &Word, pos: Pos) -> VResult<usize> {
        let gens = g.generators();
        let mut x = g.identity();
        for &(i, e) in &w.0 {
            let &s = gens.get(i).ok_or_else(|| {
                invalid(
                    pos,
                    format!(
                        "generator g{i} does not exist; the group has {} generators",
                        gens.len()
                    ),
                )
            })?;
            x = g.mul(x, g.pow(s, e));
        }
        Ok(x)
    }

    fn build_group(&self, e: &GroupExpr, label: &str, pos: Pos) -> VResult<ResolvedGroup> {
        self.check_order(self.expected_order(e, pos)?, pos)?;
        let plain = |group| ResolvedGroup {
            group,
            subgroup_of: None,
        };
        let ge = group_err(pos);
        let usz =
            |n: u64| usize::try_from(n).map_err(|_| invalid(pos, format!("{n} is too large")));
        Ok(match e {
            GroupExpr::Cyclic(n) => plain(cyclic(usz(*n)?).map_err(&ge)?),
            GroupExpr::UnitsMod(p, k) => plain(units_mod(*p, *k).map_err(&ge)?),
            GroupExpr::Dihedral(n) => plain(dihedral(usz(*n)?).map_err(&ge)?),
            GroupExpr::Symmetric(n) => plain(symmetric(usz(*n)?).map_err(&ge)?),
            GroupExpr::Alternating(n) => plain(alternating(usz(*n)?).map_err(&ge)?),
            GroupExpr::Quaternion => plain(quaternion().map_err(&ge)?),
            GroupExpr::Product(a, b) => {
                let a = self.build_group(a, label, pos)?.group;
                let b = self.build_group(b, label, pos)?.group;
                plain(direct_product(&a, &b).map_err(&ge)?)
            }
            GroupExpr::Semidirect(a, b, act) => {
                let n = self.build_group(a, label, pos)?.group;
                let h = self.build_group(b, label, pos)?.group;
                let action = match act {
                    ActionExpr::Invert => Action::Invert,
                    ActionExpr::MultAction => Action::Multiplication,
                    ActionExpr::Trivial => Action::Trivial,
                    ActionExpr::Map(entries) => {
                        let mut maps: Vec<Option<Endomorphism>> = vec![None; h.generators().len()];
                        for (i, name) in entries {
                            let slot = maps.get_mut(*i).ok_or_else(|| {
                                invalid(pos, format!("the complement has no generator g{i}"))
                            })?;
                            if slot.is_some() {
                                return Err(invalid(
                                    pos,
                                    format!("generator g{i} is assigned twice"),
                                ));
                            }
                            let f = &self.endo(name, pos)?.endo;
                            if **f.group() != *n {
                                return Err(invalid(
                                    pos,
                                    format!("`{name}` is not an endomorphism of the normal factor"),
                                ));
                            }
                            if !f.is_automorphism() {
                                return Err(invalid(
                                    pos,
                                    format!("`{name}` is not an automorphism"),
                                ));
                            }
                            *slot = Some(f.clone());
                        }
                        Action::Generators(
                            maps.into_iter()
                                .map(|m| m.unwrap_or_else(|| Endomorphism::identity(&n)).into_hom())
                                .collect(),
                        )
                    }
                };
                plain(semidirect(&n, &h, &action).map_err(&ge)?)
            }
            GroupExpr::Table(path) => {
                let full = self.base_dir.join(path);
                let text = std::fs::read_to_string(&full).map_err(|err| {
                    invalid(pos, format!("cannot read {}: {err}", full.display()))
                })?;
                let rows = parse_table_text(&text).map_err(&ge)?;
                self.check_order(rows.len() as u128, pos)?;
                plain(FiniteGroup::from_table(&rows, label).map_err(&ge)?)
            }
            GroupExpr::Subgroup(parent, words) => {
                let pg = self.group(parent, pos)?.group.clone();
                let gens = words
                    .iter()
                    .map(|w| self.eval_word(&pg, w, pos))
                    .collect::<VResult<Vec<_>>>()?;
                let sub = Subgroup::generated(&pg, gens);
                let (group, _) = sub.as_group();
                ResolvedGroup {
                    group,
                    subgroup_of: Some((parent.clone(), sub)),
                }
            }
            GroupExpr::Named(n) => self.group(n, pos)?.clone(),
        })
    }

    fn build_endo(
        &self,
        name: &str,
        g: &Arc<FiniteGroup>,
        e: &HomExpr,
        pos: Pos,
    ) -> VResult<Endomorphism> {
        let ge = group_err(pos);
        match e {
            HomExpr::Identity => Ok(Endomorphism::identity(g)),
            HomExpr::Trivial => Ok(Endomorphism::trivial(g)),
            HomExpr::ScaleFirst(m) => {
                scale_first(g, *m).map_err(|err| self.hom_err(name, err, pos))
            }
            HomExpr::Scale(c, m) => scale(g, *c, *m).map_err(|err| self.hom_err(name, err, pos)),
            HomExpr::ProjectAway(c) => {
                project_away(g, *c).map_err(|err| self.hom_err(name, err, pos))
            }
            HomExpr::Conj(w) => Ok(Endomorphism::conjugation(g, self.eval_word(g, w, pos)?)),
            HomExpr::Map(entries) => {
                let n = g.generators().len();
                let mut images: Vec<Option<usize>> = vec![None; n];
                for (i, w) in entries {
                    let slot = images.get_mut(*i).ok_or_else(|| {
                        invalid(
                            pos,
                            format!("generator g{i} does not exist; the group has {n} generators"),
                        )
                    })?;
                    if slot.is_some() {
                        return Err(invalid(pos, format!("generator g{i} is assigned twice")));
                    }
                    *slot = Some(self.eval_word(g, w, pos)?);
                }
                let images: Vec<usize> = images
                    .into_iter()
                    .enumerate()
                    .map(|(i, y)| {
                        y.ok_or_else(|| invalid(pos, format!("generator g{i} has no image")))
                    })
                    .collect::<VResult<_>>()?;
                Endomorphism::from_generator_images(g, &images)
                    .map_err(|err| self.hom_err(name, err, pos))
            }
            HomExpr::Compose(names) => {
                let mut acc: Option<Endomorphism> = None;
                for n in names.iter().rev() {
                    let f = &self.endo(n, pos)?.endo;
                    if f.group() != g {
                        return Err(invalid(
                            pos,
                            format!("`{n}` is not an endomorphism of this group"),
                        ));
                    }
                    acc = Some(match acc {
                        None => f.clone(),
                        Some(a) => a.then_endo(f).map_err(&ge)?,
                    });
                }
                Ok(acc.expect("compose has at least two parts"))
            }
        }
    }

    fn hom_err(&self, name: &str, err: Error, pos: Pos) -> DslError {
        match err {
            Error::NotAHomomorphism { x, y } => DslError::NotAHomomorphism {
                name: name.into(),
                x,
                y,
                pos,
            },
            other => group_err(pos)(other),
        }
    }

    fn statement(&mut self, st: &Stmt) -> VResult<()> {
        let pos = st.pos;
        match &st.kind {
            StmtKind::Group { name, expr } => {
                self.define(name, pos)?;
                let g = self.build_group(expr, name, pos)?;
                self.out.groups.insert(name.clone(), g);
            }
            StmtKind::Endo { name, group, expr } => {
                self.define(name, pos)?;
                let g = self.group(group, pos)?.group.clone();
                let endo = self.build_endo(name, &g, expr, pos)?;
                self.out.endos.insert(
                    name.clone(),
                    ResolvedEndo {
                        group: group.clone(),
                        endo,
                    },
                );
            }
            StmtKind::Semigroup {
                name,
                group,
                members,
                commutative,
            } => {
                self.define(name, pos)?;
                let g = self.group(group, pos)?.group.clone();
                let mut gens = Vec::new();
                for m in members {
                    let e = self.endo(m, pos)?;
                    if e.group != *group && e.endo.group() != &g {
                        return Err(invalid(
                            pos,
                            format!(
                                "`{m}` is an endomorphism of `{}`, not of `{group}`",
                                e.group
                            ),
                        ));
                    }
                    gens.push(e.endo.clone());
                }
                let semigroup = EndoSemigroup::new(&g, gens).map_err(group_err(pos))?;
                if *commutative {
                    if let Some((i, j)) = semigroup.noncommuting_pair() {
                        return Err(DslError::CommutativityFailed {
                            name: name.clone(),
                            left: members[i].clone(),
                            right: members[j].clone(),
                            pos,
                        });
                    }
                }
                self.out.semigroups.insert(
                    name.clone(),
                    ResolvedSemigroup {
                        group: group.clone(),
                        members: members.clone(),
                        semigroup,
                    },
                );
            }
            StmtKind::Tower {
                name,
                builder,
                depth,
            } => {
                self.define(name, pos)?;
                self.check_order(tower_top_order(builder, *depth), pos)?;
                let (tower, family) = build_tower(builder, *depth).map_err(group_err(pos))?;
                self.out.towers.insert(
                    name.clone(),
                    ResolvedTower {
                        kind: builder.clone(),
                        depth: *depth,
                        tower,
                        family,
                    },
                );
            }
            StmtKind::Analyze { kind, args } => {
                let req = self.request(*kind, args, pos)?;
                self.out.analyses.push(req);
            }
            StmtKind::Set { .. } => {}
        }
        Ok(())
    }

    fn operand(&self, a: &Arg, pos: Pos) -> VResult<Operand> {
        Ok(match a {
            Arg::Int(n) => Operand::Int(*n),
            Arg::None => Operand::None,
            Arg::Name(n) if self.out.groups.contains_key(n) => Operand::Group(n.clone()),
            Arg::Name(n) if self.out.endos.contains_key(n) => Operand::Endo(n.clone()),
            Arg::Name(n) if self.out.semigroups.contains_key(n) => Operand::Semigroup(n.clone()),
            Arg::Name(n) if self.out.towers.contains_key(n) => Operand::Tower(n.clone()),
            Arg::Name(n) => return Err(self.unresolved(n, "definition", pos)),
        })
    }

    /// Name of the group an endomorphism or semigroup operand lives on.
    fn home(&self, op: &Operand) -> Option<&str> {
        match op {
            Operand::Endo(n) => Some(&self.out.endos[n].group),
            Operand::Semigroup(n) => Some(&self.out.semigroups[n].group),
            _ => None,
        }
    }

    fn home_group(&self, op: &Operand) -> Option<&Arc<FiniteGroup>> {
        match op {
            Operand::Endo(n) => Some(self.out.endos[n].endo.group()),
            Operand::Semigroup(n) => Some(self.out.semigroups[n].semigroup.parent()),
            _ => None,
        }
    }

    fn request(&self, kind: AnalysisKind, args: &[Arg], pos: Pos) -> VResult<Request> {
        let mut ops = args
            .iter()
            .map(|a| self.operand(a, pos))
            .collect::<VResult<Vec<_>>>()?;
        if let [Operand::Group(g), next, ..] = ops.as_slice() {
            if let Some(home) = self.home(next) {
                let same = home == g
                    || self
                        .home_group(next)
                        .is_some_and(|h| **h == *self.out.groups[g].group);
                if !same {
                    return Err(invalid(pos, format!("`{}` does not act on `{g}`", args[1])));
                }
                ops.remove(0);
            }
        }
        let letters: Vec<char> = ops.iter().map(Operand::letter).collect();
        if !signatures(kind)
            .iter()
            .any(|s| matches_signature(s, &letters))
        {
            return Err(invalid(
                pos,
                format!(
                    "bad arguments for `{}`; expected {}",
                    kind.name(),
                    describe_signature(kind)
                ),
            ));
        }
        // subgroup operands must sit inside the group of the operand before them
        if matches!(kind, AnalysisKind::Contraction | AnalysisKind::Shrinkind) && ops.len() == 2 {
            if let (Some(home), Operand::Group(s)) = (self.home_group(&ops[0]), &ops[1]) {
                let ok = self.out.groups[s]
                    .subgroup_of
                    .as_ref()
                    .is_some_and(|(_, sub)| sub.parent() == home);
                if !ok {
                    return Err(invalid(
                        pos,
                        format!(
                            "`{s}` must be declared as `subgroup(...)` of the group `{}` acts on",
                            args[args.len() - 2]
                        ),
                    ));
                }
            }
        }
        for op in &ops {
            if let Operand::Int(n) = op {
                if *n < 0 {
                    return Err(invalid(
                        pos,
                        format!("integer arguments must be non-negative, found {n}"),
                    ));
                }
            }
        }
        if matches!(kind, AnalysisKind::Regulation | AnalysisKind::Tfrelstab2) {
            let maps: Vec<&Endomorphism> = match &ops[1] {
                Operand::Endo(n) => vec![&self.out.endos[n].endo],
                Operand::Semigroup(n) => self.out.semigroups[n]
                    .semigroup
                    .generators()
                    .iter()
                    .collect(),
                _ => Vec::new(),
            };
            let lam = self.home_group(&ops[0]).expect("checked by signature");
            if maps.iter().any(|m| m.group() != lam) {
                return Err(invalid(pos, "Λ and Ω must act on the same group"));
            }
            if maps.iter().any(|m| !m.is_automorphism()) {
                return Err(invalid(
                    pos,
                    format!("Ω `{}` must consist of automorphisms", args[args.len() - 1]),
                ));
            }
        }
        Ok(Request {
            kind,
            target: args.iter().map(ToString::to_string).collect(),
            operands: ops,
            pos,
        })
    }
}

/// Builds every object in the scenario and checks analysis signatures,
/// with table paths relative to the current directory.
pub fn validate(ast: &Scenario) -> Result<Resolved, DslError> {
    validate_with(ast, &ValidateConfig::default())
}

/// Groups are pre-sized before construction, so nothing above the guard is
/// ever built. A guard above the process-wide one raises it for the
/// duration of the call.
pub fn validate_with(ast: &Scenario, config: &ValidateConfig) -> Result<Resolved, DslError> {
    let mut r = Resolver {
        out: Resolved::default(),
        defined: BTreeMap::new(),
        guard: order_guard(),
        base_dir: &config.base_dir,
    };
    r.options(ast)?;
    let guard = config
        .order_guard
        .or(r.out.options.order_guard)
        .unwrap_or_else(order_guard);
    r.guard = guard;
    let _scope = GuardScope((guard > order_guard()).then(|| set_order_guard(guard)));
    for st in &ast.statements {
        r.statement(st)?;
    }
    Ok(r.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn load(src: &str) -> VResult<Resolved> {
        validate(&parse(src).map_err(DslError::Parse)?)
    }

    #[test]
    fn units_scenario_resolves() {
        let r = load(
            "set label = units\ntower T = units_semidirect(3) depth 3\nanalyze theorem_a(T)\nanalyze theorem_b(T)\n",
        )
        .unwrap();
        assert_eq!(r.towers.len(), 1);
        assert_eq!(r.analyses.len(), 2);
        assert_eq!(r.label(), "units");
        let orders: Vec<usize> = r.towers["T"]
            .tower
            .levels()
            .iter()
            .map(|g| g.order())
            .collect();
        assert_eq!(orders, vec![6, 54, 486]);
    }

    #[test]
    fn leading_group_is_dropped() {
        let r = load("group G = semidirect(cyclic(9), units_mod(3,2), mult_action)\nendo f on G = scale_first(3)\nanalyze theorem_a(G, f)").unwrap();
        assert_eq!(r.analyses[0].operands, vec![Operand::Endo("f".into())]);
        assert_eq!(r.analyses[0].target, vec!["G".to_string(), "f".into()]);
        assert_eq!(r.groups["G"].group.order(), 54);
    }

    #[test]
    fn bad_generator_images_give_witness() {
        // g0 generates the Z/4 factor; sending it to an element of order 3 breaks g0^4 = e
        let src = "group G = product(cyclic(4), cyclic(3))\nendo f on G = map {g0 -> g1, g1 -> g1}";
        match load(src) {
            Err(DslError::NotAHomomorphism { name, x, y, pos }) => {
                assert_eq!(name, "f");
                assert_eq!(pos.line, 2);
                assert!(x < 12 && y < 12);
            }
            other => panic!("expected NotAHomomorphism, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_unresolved_names() {
        assert!(matches!(
            load("group G = cyclic(2)\ngroup G = cyclic(3)"),
            Err(DslError::DuplicateName {
                first: Pos { line: 1, column: 1 },
                pos: Pos { line: 2, .. },
                ..
            })
        ));
        assert!(matches!(
            load("endo f on H = identity"),
            Err(DslError::NameUnresolved { .. })
        ));
        assert!(matches!(
            load("group G = cyclic(2)\nanalyze theorem_a(G)"),
            Err(DslError::Invalid { .. })
        ));
    }

    #[test]
    fn commutativity_is_checked_when_declared() {
        let src = "group G = symmetric(3)\nendo a on G = conj(g0)\nendo b on G = conj(g1)\nsemigroup L on G = {a, b} commutative";
        assert!(matches!(
            load(src),
            Err(DslError::CommutativityFailed { .. })
        ));
        let src = "group G = symmetric(3)\nendo a on G = conj(g0)\nendo b on G = conj(g1)\nsemigroup L on G = {a, b}";
        assert!(load(src).is_ok());
    }

    #[test]
    fn order_guard_blocks_construction() {
        match load("set order_guard = 100\ngroup G = symmetric(5)") {
            Err(DslError::OrderGuard {
                order: 120,
                guard: 100,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match load("group G = symmetric(9)") {
            Err(DslError::OrderGuard { order: 362880, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load("set order_guard = 50\ntower T = zp(2) depth 6"),
            Err(DslError::OrderGuard { order: 64, .. })
        ));
    }

    #[test]
    fn subgroup_operands_and_actions() {
        let src = "group G = dihedral(4)\ngroup K = subgroup(G, g0)\nendo f on G = conj(g1)\nanalyze shrinkind(G, f, K)\nendo inv on Z = scale_first(-1)\n";
        assert!(matches!(load(src), Err(DslError::NameUnresolved { .. })));
        let src = "group G = dihedral(4)\ngroup K = subgroup(G, g0)\nendo f on G = conj(g1)\nanalyze shrinkind(G, f, K)\ngroup Z = cyclic(5)\nendo inv on Z = scale_first(-1)\ngroup S = semidirect(Z, cyclic(2), {g0 -> inv})\n";
        let r = load(src).unwrap();
        assert_eq!(r.groups["K"].group.order(), 4);
        assert_eq!(r.groups["S"].group.order(), 10);
        assert!(!r.groups["S"].group.is_abelian());
    }
}
