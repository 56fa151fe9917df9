use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Pos};
use crate::tower::TowerKind;

/// Untyped expression tree; statements convert it to the typed AST.
#[derive(Clone, Debug)]
enum Term {
    Int(i64, Pos),
    Str(String, Pos),
    Name(String, Pos),
    Call {
        name: String,
        args: Vec<Term>,
        pos: Pos,
    },
    Map {
        entries: Vec<(Term, Term)>,
        pos: Pos,
    },
    Word {
        factors: Vec<(String, i64)>,
        pos: Pos,
    },
}

impl Term {
    fn pos(&self) -> Pos {
        match self {
            Term::Int(_, p) | Term::Str(_, p) | Term::Name(_, p) => *p,
            Term::Call { pos, .. } | Term::Map { pos, .. } | Term::Word { pos, .. } => *pos,
        }
    }

    fn describe(&self) -> String {
        match self {
            Term::Int(n, _) => format!("integer {n}"),
            Term::Str(..) => "string".into(),
            Term::Name(n, _) => format!("name `{n}`"),
            Term::Call { name, .. } => format!("`{name}(...)`"),
            Term::Map { .. } => "`{...}` map".into(),
            Term::Word { .. } => "word".into(),
        }
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    lines: Vec<&'a str>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn err(&self, pos: Pos, msg: impl Into<String>) -> Diagnostic {
        let line = self.lines.get(pos.line - 1).copied().unwrap_or("");
        Diagnostic::error(pos, msg, line)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> PResult<Pos> {
        if self.peek() == want {
            Ok(self.bump().pos)
        } else {
            Err(self.err(
                self.pos(),
                format!("expected {what}, found {}", self.peek().describe()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.bump().pos;
                Ok((s, p))
            }
            t => Err(self.err(
                self.pos(),
                format!("expected {what}, found {}", t.describe()),
            )),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => Err(self.err(
                self.pos(),
                format!("expected `{kw}`, found {}", t.describe()),
            )),
        }
    }

    fn skip_line(&mut self) {
        while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
            self.bump();
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline | Tok::Eof => Ok(()),
            t => Err(self.err(
                self.pos(),
                format!("unexpected {} after statement", t.describe()),
            )),
        }
    }

    fn signed_int(&mut self) -> PResult<(i64, Pos)> {
        let pos = self.pos();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok((if neg { -n } else { n }, pos))
            }
            t => Err(self.err(
                self.pos(),
                format!("expected integer, found {}", t.describe()),
            )),
        }
    }

    /// Parses `open item (, item)* close`, reporting an unclosed delimiter at
    /// its opening position.
    fn delimited<T>(
        &mut self,
        open: Pos,
        close: &Tok,
        open_text: &str,
        mut item: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            if matches!(self.peek(), Tok::Newline | Tok::Eof) {
                return Err(self.err(open, format!("unclosed `{open_text}`")));
            }
            out.push(item(self)?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if t == close => {
                    self.bump();
                    return Ok(out);
                }
                Tok::Newline | Tok::Eof => {
                    return Err(self.err(open, format!("unclosed `{open_text}`")))
                }
                t => {
                    return Err(self.err(
                        self.pos(),
                        format!(
                            "expected `,` or {}, found {}",
                            close.describe(),
                            t.describe()
                        ),
                    ))
                }
            }
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => {
                let (n, p) = self.signed_int()?;
                Ok(Term::Int(n, p))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::Str(s, pos))
            }
            Tok::LBrace => {
                self.bump();
                let entries = self.delimited(pos, &Tok::RBrace, "{", |p| {
                    let k = p.term()?;
                    p.expect(&Tok::Arrow, "`->`")?;
                    let v = p.term()?;
                    Ok((k, v))
                })?;
                Ok(Term::Map { entries, pos })
            }
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        let open = self.bump().pos;
                        let args = self.delimited(open, &Tok::RParen, "(", Self::term)?;
                        Ok(Term::Call { name, args, pos })
                    }
                    Tok::LBrace if name == "map" => {
                        let m = self.term()?;
                        Ok(Term::Call {
                            name,
                            args: vec![m],
                            pos,
                        })
                    }
                    Tok::Caret | Tok::Star => self.word(name, pos),
                    _ => Ok(Term::Name(name, pos)),
                }
            }
            t => Err(self.err(
                pos,
                format!("expected an expression, found {}", t.describe()),
            )),
        }
    }

    fn word(&mut self, first: String, pos: Pos) -> PResult<Term> {
        let mut factors = Vec::new();
        let mut name = first;
        loop {
            let exp = if *self.peek() == Tok::Caret {
                self.bump();
                self.signed_int()?.0
            } else {
                1
            };
            factors.push((name, exp));
            if *self.peek() != Tok::Star {
                return Ok(Term::Word { factors, pos });
            }
            self.bump();
            name = self.ident("generator")?.0;
        }
    }

    fn statement(&mut self) -> PResult<Option<Stmt>> {
        let pos = self.pos();
        let (kw, _) = match self.peek() {
            Tok::Newline => {
                self.bump();
                return Ok(None);
            }
            Tok::Ident(_) => self.ident("statement")?,
            t => return Err(self.err(pos, format!("expected a statement, found {}", t.describe()))),
        };
        let kind = match kw.as_str() {
            "group" => {
                let (name, _) = self.ident("group name")?;
                self.expect(&Tok::Eq, "`=`")?;
                let t = self.term()?;
                StmtKind::Group {
                    name,
                    expr: self.group_expr(&t)?,
                }
            }
            "endo" => {
                let (name, _) = self.ident("endomorphism name")?;
                self.keyword("on")?;
                let (group, _) = self.ident("group name")?;
                self.expect(&Tok::Eq, "`=`")?;
                let t = self.term()?;
                StmtKind::Endo {
                    name,
                    group,
                    expr: self.hom_expr(&t)?,
                }
            }
            "semigroup" => {
                let (name, _) = self.ident("semigroup name")?;
                self.keyword("on")?;
                let (group, _) = self.ident("group name")?;
                self.expect(&Tok::Eq, "`=`")?;
                let open = self.expect(&Tok::LBrace, "`{`")?;
                let members = self.delimited(open, &Tok::RBrace, "{", |p| Ok(p.ident("endomorphism name")?.0))?;
                if members.is_empty() {
                    return Err(self.err(open, "a semigroup needs at least one generator"));
                }
                let commutative = match self.peek() {
                    Tok::Ident(s) if s == "commutative" => {
                        self.bump();
                        true
                    }
                    _ => false,
                };
                StmtKind::Semigroup {
                    name,
                    group,
                    members,
                    commutative,
                }
            }
            "tower" => {
                let (name, _) = self.ident("tower name")?;
                self.expect(&Tok::Eq, "`=`")?;
                let t = self.term()?;
                let builder = self.tower_kind(&t)?;
                self.keyword("depth")?;
                let (d, dpos) = self.signed_int()?;
                if d < 1 {
                    return Err(self.err(dpos, "depth must be at least 1"));
                }
                StmtKind::Tower {
                    name,
                    builder,
                    depth: d as usize,
                }
            }
            "analyze" => {
                let t = self.term()?;
                let Term::Call { name, args, pos } = t else {
                    return Err(self.err(t.pos(), "expected `analysis(arguments)`"));
                };
                let kind = AnalysisKind::from_name(&name).ok_or_else(|| {
                    let known: Vec<&str> = AnalysisKind::ALL.iter().map(|k| k.name()).collect();
                    self.err(pos, format!("unknown analysis `{name}`; expected one of {}", known.join(", ")))
                })?;
                let args = args
                    .iter()
                    .map(|a| match a {
                        Term::Name(n, _) if n == "none" => Ok(Arg::None),
                        Term::Name(n, _) => Ok(Arg::Name(n.clone())),
                        Term::Int(n, _) => Ok(Arg::Int(*n)),
                        other => Err(self.err(other.pos(), format!("unexpected {} as analysis argument", other.describe()))),
                    })
                    .collect::<PResult<_>>()?;
                StmtKind::Analyze { kind, args }
            }
            "set" => {
                let (key, kpos) = self.ident("option name")?;
                if !super::OPTION_KEYS.contains(&key.as_str()) {
                    return Err(self.err(
                        kpos,
                        format!("unknown option `{key}`; expected one of {}", super::OPTION_KEYS.join(", ")),
                    ));
                }
                self.expect(&Tok::Eq, "`=`")?;
                let value = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        Value::Str(s)
                    }
                    Tok::Ident(s) => {
                        self.bump();
                        Value::Name(s)
                    }
                    _ => Value::Int(self.signed_int()?.0),
                };
                StmtKind::Set { key, value }
            }
            other => {
                return Err(self.err(
                    pos,
                    format!("unknown keyword `{other}`; expected group, endo, semigroup, tower, analyze or set"),
                ))
            }
        };
        self.end_of_statement()?;
        Ok(Some(Stmt { kind, pos }))
    }

    fn arity(&self, name: &str, args: &[Term], pos: Pos, want: usize) -> PResult<()> {
        if args.len() == want {
            Ok(())
        } else {
            Err(self.err(
                pos,
                format!(
                    "`{name}` expects {want} argument{}, found {}",
                    if want == 1 { "" } else { "s" },
                    args.len()
                ),
            ))
        }
    }

    fn nat(&self, t: &Term) -> PResult<u64> {
        match t {
            Term::Int(n, _) if *n >= 0 => Ok(*n as u64),
            other => Err(self.err(
                other.pos(),
                format!(
                    "expected a non-negative integer, found {}",
                    other.describe()
                ),
            )),
        }
    }

    fn int(&self, t: &Term) -> PResult<i64> {
        match t {
            Term::Int(n, _) => Ok(*n),
            other => Err(self.err(
                other.pos(),
                format!("expected an integer, found {}", other.describe()),
            )),
        }
    }

    fn name(&self, t: &Term) -> PResult<String> {
        match t {
            Term::Name(n, _) => Ok(n.clone()),
            other => Err(self.err(
                other.pos(),
                format!("expected a name, found {}", other.describe()),
            )),
        }
    }

    fn gen_index(&self, name: &str, pos: Pos) -> PResult<usize> {
        name.strip_prefix('g')
            .and_then(|d| {
                if d.chars().all(|c| c.is_ascii_digit()) && !d.is_empty() {
                    d.parse().ok()
                } else {
                    None
                }
            })
            .ok_or_else(|| self.err(pos, format!("expected a generator `gN`, found `{name}`")))
    }

    fn word_of(&self, t: &Term) -> PResult<Word> {
        match t {
            Term::Name(n, _) if n == "e" => Ok(Word::default()),
            Term::Name(n, p) => Ok(Word(vec![(self.gen_index(n, *p)?, 1)])),
            Term::Word { factors, pos } => {
                let mut out = Vec::new();
                for (n, e) in factors {
                    out.push((self.gen_index(n, *pos)?, *e));
                }
                Ok(Word(out))
            }
            other => Err(self.err(
                other.pos(),
                format!("expected a word in generators, found {}", other.describe()),
            )),
        }
    }

    fn group_expr(&self, t: &Term) -> PResult<GroupExpr> {
        match t {
            Term::Name(n, _) => Ok(GroupExpr::Named(n.clone())),
            Term::Call { name, args, pos } => {
                let (a, p) = (args.as_slice(), *pos);
                Ok(match name.as_str() {
                    "cyclic" => {
                        self.arity(name, a, p, 1)?;
                        GroupExpr::Cyclic(self.nat(&a[0])?)
                    }
                    "units_mod" => {
                        self.arity(name, a, p, 2)?;
                        let k = self.nat(&a[1])?;
                        GroupExpr::UnitsMod(
                            self.nat(&a[0])?,
                            u32::try_from(k)
                                .map_err(|_| self.err(a[1].pos(), "exponent too large"))?,
                        )
                    }
                    "dihedral" => {
                        self.arity(name, a, p, 1)?;
                        GroupExpr::Dihedral(self.nat(&a[0])?)
                    }
                    "symmetric" => {
                        self.arity(name, a, p, 1)?;
                        GroupExpr::Symmetric(self.nat(&a[0])?)
                    }
                    "alternating" => {
                        self.arity(name, a, p, 1)?;
                        GroupExpr::Alternating(self.nat(&a[0])?)
                    }
                    "quaternion" => {
                        self.arity(name, a, p, 0)?;
                        GroupExpr::Quaternion
                    }
                    "product" => {
                        self.arity(name, a, p, 2)?;
                        GroupExpr::Product(
                            Box::new(self.group_expr(&a[0])?),
                            Box::new(self.group_expr(&a[1])?),
                        )
                    }
                    "semidirect" => {
                        self.arity(name, a, p, 3)?;
                        GroupExpr::Semidirect(
                            Box::new(self.group_expr(&a[0])?),
                            Box::new(self.group_expr(&a[1])?),
                            self.action(&a[2])?,
                        )
                    }
                    "table" => {
                        self.arity(name, a, p, 1)?;
                        match &a[0] {
                            Term::Str(s, _) => GroupExpr::Table(s.clone()),
                            other => return Err(self.err(other.pos(), "expected a quoted path")),
                        }
                    }
                    "subgroup" => {
                        if a.is_empty() {
                            return Err(
                                self.err(p, "`subgroup` expects a group name and generator words")
                            );
                        }
                        let words = a[1..]
                            .iter()
                            .map(|w| self.word_of(w))
                            .collect::<PResult<_>>()?;
                        GroupExpr::Subgroup(self.name(&a[0])?, words)
                    }
                    other => {
                        return Err(self.err(p, format!("unknown group constructor `{other}`")))
                    }
                })
            }
            other => Err(self.err(
                other.pos(),
                format!("expected a group expression, found {}", other.describe()),
            )),
        }
    }

    fn action(&self, t: &Term) -> PResult<ActionExpr> {
        match t {
            Term::Name(n, p) => match n.as_str() {
                "invert" => Ok(ActionExpr::Invert),
                "mult_action" => Ok(ActionExpr::MultAction),
                "trivial" => Ok(ActionExpr::Trivial),
                other => Err(self.err(
                    *p,
                    format!(
                        "unknown action `{other}`; expected invert, mult_action, trivial or a map"
                    ),
                )),
            },
            Term::Map { entries, .. } => {
                let mut out = Vec::new();
                for (k, v) in entries {
                    let Term::Name(gname, gp) = k else {
                        return Err(self.err(k.pos(), "expected a generator `gN`"));
                    };
                    out.push((self.gen_index(gname, *gp)?, self.name(v)?));
                }
                Ok(ActionExpr::Map(out))
            }
            other => Err(self.err(
                other.pos(),
                format!("expected an action, found {}", other.describe()),
            )),
        }
    }

    fn hom_expr(&self, t: &Term) -> PResult<HomExpr> {
        match t {
            Term::Name(n, p) => match n.as_str() {
                "identity" => Ok(HomExpr::Identity),
                "trivial" => Ok(HomExpr::Trivial),
                other => Err(self.err(*p, format!("unknown endomorphism `{other}`"))),
            },
            Term::Call { name, args, pos } => {
                let (a, p) = (args.as_slice(), *pos);
                Ok(match name.as_str() {
                    "identity" | "trivial" => {
                        self.arity(name, a, p, 0)?;
                        if name == "identity" {
                            HomExpr::Identity
                        } else {
                            HomExpr::Trivial
                        }
                    }
                    "scale_first" => {
                        self.arity(name, a, p, 1)?;
                        HomExpr::ScaleFirst(self.int(&a[0])?)
                    }
                    "scale" => {
                        self.arity(name, a, p, 2)?;
                        HomExpr::Scale(self.nat(&a[0])? as usize, self.int(&a[1])?)
                    }
                    "project_away" => {
                        self.arity(name, a, p, 1)?;
                        HomExpr::ProjectAway(self.nat(&a[0])? as usize)
                    }
                    "conj" => {
                        self.arity(name, a, p, 1)?;
                        HomExpr::Conj(self.word_of(&a[0])?)
                    }
                    "compose" => {
                        if a.len() < 2 {
                            return Err(self.err(p, "`compose` expects at least 2 arguments"));
                        }
                        HomExpr::Compose(a.iter().map(|x| self.name(x)).collect::<PResult<_>>()?)
                    }
                    "map" => {
                        let Some(Term::Map { entries, .. }) = a.first() else {
                            return Err(self.err(p, "expected `map {g0 -> word, ...}`"));
                        };
                        let mut out = Vec::new();
                        for (k, v) in entries {
                            let Term::Name(gname, gp) = k else {
                                return Err(self.err(k.pos(), "expected a generator `gN`"));
                            };
                            out.push((self.gen_index(gname, *gp)?, self.word_of(v)?));
                        }
                        HomExpr::Map(out)
                    }
                    other => {
                        return Err(
                            self.err(p, format!("unknown endomorphism constructor `{other}`"))
                        )
                    }
                })
            }
            other => Err(self.err(
                other.pos(),
                format!("expected an endomorphism, found {}", other.describe()),
            )),
        }
    }

    fn tower_kind(&self, t: &Term) -> PResult<TowerKind> {
        let (name, args, p) = match t {
            Term::Name(n, p) => (n.as_str(), &[][..], *p),
            Term::Call { name, args, pos } => (name.as_str(), args.as_slice(), *pos),
            other => {
                return Err(self.err(
                    other.pos(),
                    format!("expected a tower builder, found {}", other.describe()),
                ))
            }
        };
        Ok(match name {
            "zp" => {
                self.arity(name, args, p, 1)?;
                TowerKind::Zp(self.nat(&args[0])?)
            }
            "zpn" => {
                self.arity(name, args, p, 2)?;
                TowerKind::Zpn(self.nat(&args[0])?, self.nat(&args[1])? as usize)
            }
            "units_semidirect" => {
                self.arity(name, args, p, 1)?;
                TowerKind::UnitsSemidirect(self.nat(&args[0])?)
            }
            "product" => {
                self.arity(name, args, p, 2)?;
                TowerKind::Product(Box::new(self.tower_kind(&args[0])?), Box::new(self.tower_kind(&args[1])?))
            }
            "s3_times_z2" => {
                self.arity(name, args, p, 0)?;
                TowerKind::S3TimesZ2
            }
            "trivial" => {
                self.arity(name, args, p, 0)?;
                TowerKind::Trivial
            }
            "constant_s3" => {
                self.arity(name, args, p, 0)?;
                TowerKind::ConstantS3
            }
            other => {
                return Err(self.err(
                    p,
                    format!("unknown tower builder `{other}`; expected zp, zpn, units_semidirect, product, s3_times_z2, constant_s3 or trivial"),
                ))
            }
        })
    }
}

/// Parses a scenario. Every malformed statement yields one diagnostic; the
/// parser resumes at the next line, and no partial scenario is returned.
pub fn parse(source: &str) -> Result<Scenario, Vec<Diagnostic>> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        at: 0,
        lines: source.lines().collect(),
    };
    let mut statements = Vec::new();
    let mut diags = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.statement() {
            Ok(Some(s)) => statements.push(s),
            Ok(None) => {}
            Err(d) => {
                diags.push(d);
                p.skip_line();
            }
        }
        if *p.peek() == Tok::Newline {
            p.bump();
        }
    }
    if diags.is_empty() {
        Ok(Scenario { statements })
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_comments() {
        assert!(parse("").unwrap().statements.is_empty());
        assert!(parse("# only a comment\n\n   \n")
            .unwrap()
            .statements
            .is_empty());
    }

    #[test]
    fn walkthrough() {
        let s = parse(
            "group G = semidirect(cyclic(9), units_mod(3,2), mult_action)\nendo f on G = scale_first(3)\nanalyze theorem_a(G, f)",
        )
        .unwrap();
        assert_eq!(s.statements.len(), 3);
        let analyses = s
            .statements
            .iter()
            .filter(|st| matches!(st.kind, StmtKind::Analyze { .. }))
            .count();
        assert_eq!(analyses, 1);
        assert_eq!(
            s.statements[0].kind,
            StmtKind::Group {
                name: "G".into(),
                expr: GroupExpr::Semidirect(
                    Box::new(GroupExpr::Cyclic(9)),
                    Box::new(GroupExpr::UnitsMod(3, 2)),
                    ActionExpr::MultAction
                )
            }
        );
    }

    #[test]
    fn unclosed_paren_located_at_opener() {
        let d = parse("group G = cyclic(").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(
            d[0].pos,
            Pos {
                line: 1,
                column: 17
            }
        );
        assert!(d[0].message.contains("unclosed"));
    }

    #[test]
    fn recovery_reports_each_bad_line() {
        let src = "group A = cyclic(4)\nbogus thing\ngroup B = cyclic(1, 2)\nendo f on A = map {g0 -> g0^3\nanalyze nope(A)\n";
        let d = parse(src).unwrap_err();
        let lines: Vec<usize> = d.iter().map(|x| x.pos.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5]);
        assert!(d[0].message.contains("unknown keyword"));
        assert!(d[1].message.contains("expects 1 argument"));
        assert!(d[2].message.contains("unclosed `{`"));
        assert_eq!(d[2].pos.column, 19);
        assert!(d[3].message.contains("unknown analysis"));
    }

    #[test]
    fn words_maps_and_towers() {
        let s = parse(
            "endo f on G = map {g0 -> g1^-1 * g0, g1 -> e}\nendo c on G = conj(g1^2)\ntower T = product(zp(2), s3_times_z2) depth 2\nsemigroup L on G = {f, c} commutative\nset label = \"x\"\nanalyze regulation(L, none)",
        )
        .unwrap();
        assert_eq!(
            s.statements[0].kind,
            StmtKind::Endo {
                name: "f".into(),
                group: "G".into(),
                expr: HomExpr::Map(vec![(0, Word(vec![(1, -1), (0, 1)])), (1, Word::default())])
            }
        );
        assert_eq!(
            s.statements[2].kind,
            StmtKind::Tower {
                name: "T".into(),
                builder: TowerKind::Product(
                    Box::new(TowerKind::Zp(2)),
                    Box::new(TowerKind::S3TimesZ2)
                ),
                depth: 2
            }
        );
        let again = parse(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn diagnostic_positions_are_real() {
        let src = "group G = cyclic(4)\n  endo f on G = map {g0 -> x1}\nset nope = 3\n";
        for d in parse(src).unwrap_err() {
            let line = src.lines().nth(d.pos.line - 1).unwrap();
            assert!(d.pos.column <= line.chars().count() + 1);
            assert_eq!(d.snippet, line);
        }
    }
}
