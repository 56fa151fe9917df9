//! Scenario files: a line-oriented language naming groups, endomorphisms,
//! semigroups and towers, followed by analysis requests.
//!
//! ```text
//! # comment
//! group G = semidirect(cyclic(9), units_mod(3, 2), mult_action)
//! endo f on G = scale_first(3)
//! tower T = units_semidirect(3) depth 3
//! analyze theorem_a(G, f)
//! analyze typef(T, 2)
//! set seed = 7
//! ```
//!
//! [`parse`] turns text into a [`Scenario`]; [`validate`] builds every object
//! and checks each analysis signature.

pub mod ast;
mod lexer;
mod parser;
mod resolve;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use parser::parse;
pub use resolve::{
    validate, validate_with, Operand, Request, Resolved, ResolvedEndo, ResolvedGroup,
    ResolvedSemigroup, ResolvedTower, ScenarioOptions, ValidateConfig,
};

/// Keys accepted by `set`.
pub const OPTION_KEYS: [&str; 5] = ["order_guard", "node_budget", "jobs", "seed", "label"];

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub pos: Pos,
    /// The full source line the position points into.
    pub snippet: String,
}

impl Diagnostic {
    pub fn error(pos: Pos, message: impl Into<String>, line: &str) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            pos,
            snippet: line.to_string(),
        }
    }
}

/// `line:col: error: message`, then the source line with a caret.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        writeln!(f, "{}: {sev}: {}", self.pos, self.message)?;
        writeln!(f, "  {}", self.snippet)?;
        write!(f, "  {}^", " ".repeat(self.pos.column.saturating_sub(1)))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{} syntax error(s), first at {}", .0.len(), .0.first().map(|d| d.pos).unwrap_or_default())]
    Parse(Vec<Diagnostic>),
    #[error("{pos}: unresolved name `{name}`: {reason}")]
    NameUnresolved {
        name: String,
        reason: String,
        pos: Pos,
    },
    #[error("{pos}: `{name}` is already defined at {first}")]
    DuplicateName { name: String, first: Pos, pos: Pos },
    #[error("{pos}: `{name}` is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotAHomomorphism {
        name: String,
        x: usize,
        y: usize,
        pos: Pos,
    },
    #[error("{pos}: semigroup `{name}` is declared commutative but `{left}` and `{right}` do not commute")]
    CommutativityFailed {
        name: String,
        left: String,
        right: String,
        pos: Pos,
    },
    #[error("{pos}: group of order {order} exceeds the order guard {guard}")]
    OrderGuard {
        order: usize,
        guard: usize,
        pos: Pos,
    },
    #[error("{pos}: {message}")]
    Invalid { message: String, pos: Pos },
    #[error("{pos}: {source}")]
    Group { source: crate::Error, pos: Pos },
}

impl DslError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            DslError::Parse(d) => d.first().map(|d| d.pos),
            DslError::NameUnresolved { pos, .. }
            | DslError::DuplicateName { pos, .. }
            | DslError::NotAHomomorphism { pos, .. }
            | DslError::CommutativityFailed { pos, .. }
            | DslError::OrderGuard { pos, .. }
            | DslError::Invalid { pos, .. }
            | DslError::Group { pos, .. } => Some(*pos),
        }
    }

    /// Located diagnostics against the source the scenario came from.
    pub fn diagnostics(&self, source: &str) -> Vec<Diagnostic> {
        match self {
            DslError::Parse(d) => d.clone(),
            other => {
                let pos = other.pos().unwrap_or(Pos { line: 1, column: 1 });
                let line = source.lines().nth(pos.line.saturating_sub(1)).unwrap_or("");
                let msg = other.to_string();
                let msg = msg
                    .split_once(": ")
                    .map_or(msg.as_str(), |(_, m)| m)
                    .to_string();
                vec![Diagnostic::error(pos, msg, line)]
            }
        }
    }
}

/// Parses and validates in one step.
pub fn load(source: &str, config: &ValidateConfig) -> Result<Resolved, DslError> {
    let ast = parse(source).map_err(DslError::Parse)?;
    validate_with(&ast, config)
}
