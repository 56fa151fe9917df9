use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Arrow,
    Star,
    Caret,
    Minus,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits source into tokens. Comments run from `#` to end of line.
/// Columns count characters, not bytes.
pub fn lex(source: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (li, line) in source.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: li + 1,
                column: i + 1,
            };
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token { tok, pos });
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Token {
                        tok: Tok::Arrow,
                        pos,
                    });
                    i += 2;
                } else {
                    out.push(Token {
                        tok: Tok::Minus,
                        pos,
                    });
                    i += 1;
                }
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                match text.parse() {
                    Ok(n) => out.push(Token {
                        tok: Tok::Int(n),
                        pos,
                    }),
                    Err(_) => diags.push(Diagnostic::error(
                        pos,
                        format!("integer `{text}` is too large"),
                        line,
                    )),
                }
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    pos,
                });
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    diags.push(Diagnostic::error(pos, "unterminated string", line));
                } else {
                    out.push(Token {
                        tok: Tok::Str(chars[start..i].iter().collect()),
                        pos,
                    });
                    i += 1;
                }
            } else {
                diags.push(Diagnostic::error(
                    pos,
                    format!("unexpected character `{c}`"),
                    line,
                ));
                i += 1;
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            pos: Pos {
                line: li + 1,
                column: chars.len() + 1,
            },
        });
    }
    let last = source.lines().count();
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos {
            line: last.max(1),
            column: source.lines().last().map_or(1, |l| l.chars().count() + 1),
        },
    });
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("endo f on G = map {g0 -> g1^-2} # note"),
            vec![
                Tok::Ident("endo".into()),
                Tok::Ident("f".into()),
                Tok::Ident("on".into()),
                Tok::Ident("G".into()),
                Tok::Eq,
                Tok::Ident("map".into()),
                Tok::LBrace,
                Tok::Ident("g0".into()),
                Tok::Arrow,
                Tok::Ident("g1".into()),
                Tok::Caret,
                Tok::Minus,
                Tok::Int(2),
                Tok::RBrace,
                Tok::Newline,
                Tok::Eof,
            ]
        );
        assert_eq!(toks(""), vec![Tok::Eof]);
    }

    #[test]
    fn positions_and_errors() {
        let t = lex("a\n  bb(").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, column: 3 });
        assert_eq!(t[3].pos, Pos { line: 2, column: 5 });
        let e = lex("x = $").unwrap_err();
        assert_eq!(e[0].pos, Pos { line: 1, column: 5 });
        assert!(lex("table(\"abc").is_err());
    }
}
