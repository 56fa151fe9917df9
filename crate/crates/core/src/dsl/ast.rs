use std::fmt;

use super::Pos;
use crate::tower::TowerKind;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scenario {
    pub statements: Vec<Stmt>,
}

/// A statement with the position of its first token. Equality ignores the
/// position so reformatted sources compare equal.
#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Group {
        name: String,
        expr: GroupExpr,
    },
    Endo {
        name: String,
        group: String,
        expr: HomExpr,
    },
    Semigroup {
        name: String,
        group: String,
        members: Vec<String>,
        commutative: bool,
    },
    Tower {
        name: String,
        builder: TowerKind,
        depth: usize,
    },
    Analyze {
        kind: AnalysisKind,
        args: Vec<Arg>,
    },
    Set {
        key: String,
        value: Value,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Cyclic(u64),
    UnitsMod(u64, u32),
    Dihedral(u64),
    Symmetric(u64),
    Alternating(u64),
    Quaternion,
    Product(Box<GroupExpr>, Box<GroupExpr>),
    Semidirect(Box<GroupExpr>, Box<GroupExpr>, ActionExpr),
    Table(String),
    /// Subgroup of a named group generated by words.
    Subgroup(String, Vec<Word>),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionExpr {
    Invert,
    MultAction,
    Trivial,
    /// Complement generator index to the name of an automorphism of the
    /// normal factor.
    Map(Vec<(usize, String)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomExpr {
    Identity,
    Trivial,
    ScaleFirst(i64),
    Scale(usize, i64),
    ProjectAway(usize),
    Conj(Word),
    /// Generator index to image word.
    Map(Vec<(usize, Word)>),
    /// `compose(f, g)` is `x ↦ f(g(x))`.
    Compose(Vec<String>),
}

/// Product of generator powers; empty is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, i64)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    Int(i64),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Str(String),
    Name(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalysisKind {
    TheoremA,
    Contraction,
    Splitthm,
    TheoremB,
    Regulation,
    Tfrelstab2,
    Shrinkind,
    OPi,
    Fewprimes,
    HomSearch,
    TypeF,
}

impl AnalysisKind {
    pub const ALL: [AnalysisKind; 11] = [
        AnalysisKind::TheoremA,
        AnalysisKind::Contraction,
        AnalysisKind::Splitthm,
        AnalysisKind::TheoremB,
        AnalysisKind::Regulation,
        AnalysisKind::Tfrelstab2,
        AnalysisKind::Shrinkind,
        AnalysisKind::OPi,
        AnalysisKind::Fewprimes,
        AnalysisKind::HomSearch,
        AnalysisKind::TypeF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::TheoremA => "theorem_a",
            AnalysisKind::Contraction => "contraction",
            AnalysisKind::Splitthm => "splitthm",
            AnalysisKind::TheoremB => "theorem_b",
            AnalysisKind::Regulation => "regulation",
            AnalysisKind::Tfrelstab2 => "tfrelstab2",
            AnalysisKind::Shrinkind => "shrinkind",
            AnalysisKind::OPi => "o_pi",
            AnalysisKind::Fewprimes => "fewprimes",
            AnalysisKind::HomSearch => "hom_search",
            AnalysisKind::TypeF => "typef",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    format!("g{g}")
                } else {
                    format!("g{g}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupExpr::UnitsMod(p, k) => write!(f, "units_mod({p}, {k})"),
            GroupExpr::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupExpr::Symmetric(n) => write!(f, "symmetric({n})"),
            GroupExpr::Alternating(n) => write!(f, "alternating({n})"),
            GroupExpr::Quaternion => write!(f, "quaternion()"),
            GroupExpr::Product(a, b) => write!(f, "product({a}, {b})"),
            GroupExpr::Semidirect(a, b, act) => write!(f, "semidirect({a}, {b}, {act})"),
            GroupExpr::Table(p) => write!(f, "table(\"{p}\")"),
            GroupExpr::Subgroup(g, words) => {
                write!(f, "subgroup({g}")?;
                for w in words {
                    write!(f, ", {w}")?;
                }
                write!(f, ")")
            }
            GroupExpr::Named(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for ActionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionExpr::Invert => write!(f, "invert"),
            ActionExpr::MultAction => write!(f, "mult_action"),
            ActionExpr::Trivial => write!(f, "trivial"),
            ActionExpr::Map(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(g, e)| format!("g{g} -> {e}"))
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for HomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomExpr::Identity => write!(f, "identity"),
            HomExpr::Trivial => write!(f, "trivial"),
            HomExpr::ScaleFirst(m) => write!(f, "scale_first({m})"),
            HomExpr::Scale(c, m) => write!(f, "scale({c}, {m})"),
            HomExpr::ProjectAway(c) => write!(f, "project_away({c})"),
            HomExpr::Conj(w) => write!(f, "conj({w})"),
            HomExpr::Map(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(g, w)| format!("g{g} -> {w}"))
                    .collect();
                write!(f, "map {{{}}}", parts.join(", "))
            }
            HomExpr::Compose(names) => write!(f, "compose({})", join(names)),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n) => write!(f, "{n}"),
            Arg::Int(n) => write!(f, "{n}"),
            Arg::None => write!(f, "none"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "\"{s}\""),
            Value::Name(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Group { name, expr } => write!(f, "group {name} = {expr}"),
            StmtKind::Endo { name, group, expr } => write!(f, "endo {name} on {group} = {expr}"),
            StmtKind::Semigroup {
                name,
                group,
                members,
                commutative,
            } => {
                write!(f, "semigroup {name} on {group} = {{{}}}", join(members))?;
                if *commutative {
                    write!(f, " commutative")?;
                }
                Ok(())
            }
            StmtKind::Tower {
                name,
                builder,
                depth,
            } => write!(f, "tower {name} = {builder} depth {depth}"),
            StmtKind::Analyze { kind, args } => {
                write!(f, "analyze {}({})", kind.name(), join(args))
            }
            StmtKind::Set { key, value } => write!(f, "set {key} = {value}"),
        }
    }
}

/// Canonical source text, one statement per line.
impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
