//! Denotation systems `(S, d)`: an ordered list of denoted vertices, each
//! with exactly one formula.
//!
//! Variables mentioned by some formula but not denoted are *free*. A system
//! without free variables is closed. Free variables model the open ends of
//! finite windows into infinite structures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::formula::{Formula, FormulaParser, Valuation, VarId};
use crate::graph::DiGraph;
use crate::lex::{lines, tokenize, ParseError, ParseErrorKind, Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("vertex `{0}` is defined twice")]
    DuplicateVertex(VarId),
    #[error("denotation of `{0}` mentions `{0}` itself (loops not allowed)")]
    SelfReference(VarId),
    #[error("system is open (free variables: {})", join(.0))]
    OpenSystem(Vec<VarId>),
    #[error("valuation has no value for `{0}`")]
    PartialValuation(VarId),
}

fn join(vars: &[VarId]) -> String {
    let mut s = String::new();
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{v}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenotationSystem {
    name: Option<String>,
    denoted: Vec<VarId>,
    defs: BTreeMap<VarId, Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VarId,
    /// Value of the vertex's formula under the valuation.
    pub expected: bool,
    /// Value the valuation assigns to the vertex.
    pub got: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptabilityReport {
    pub acceptable: bool,
    pub violations: Vec<Violation>,
}

/// How a finite window treats references beyond its range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationPolicy {
    /// Delete out-of-range literals from their enclosing junction.
    Clip,
    GroundTrue,
    GroundFalse,
}

impl DenotationSystem {
    /// Builds a system from definitions in order. With `allow_loops` unset,
    /// a formula mentioning its own vertex is rejected.
    pub fn new(
        definitions: impl IntoIterator<Item = (VarId, Formula)>,
        allow_loops: bool,
    ) -> Result<Self, SystemError> {
        let mut sys = DenotationSystem {
            name: None,
            denoted: Vec::new(),
            defs: BTreeMap::new(),
        };
        for (v, f) in definitions {
            if !allow_loops && f.mentions(&v) {
                return Err(SystemError::SelfReference(v));
            }
            if sys.defs.contains_key(&v) {
                return Err(SystemError::DuplicateVertex(v));
            }
            sys.denoted.push(v.clone());
            sys.defs.insert(v, f);
        }
        Ok(sys)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn denoted(&self) -> &[VarId] {
        &self.denoted
    }

    pub fn len(&self) -> usize {
        self.denoted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denoted.is_empty()
    }

    pub fn is_denoted(&self, v: &VarId) -> bool {
        self.defs.contains_key(v)
    }

    pub fn formula(&self, v: &VarId) -> Option<&Formula> {
        self.defs.get(v)
    }

    /// Definitions in vertex order.
    pub fn definitions(&self) -> impl Iterator<Item = (&VarId, &Formula)> {
        self.denoted.iter().map(move |v| (v, &self.defs[v]))
    }

    /// Mentioned but undenoted variables, sorted by name.
    pub fn free_vars(&self) -> Vec<VarId> {
        let mut free = BTreeSet::new();
        for f in self.defs.values() {
            free.extend(f.occurring().into_iter().filter(|x| !self.defs.contains_key(x)));
        }
        free.into_iter().collect()
    }

    pub fn is_closed(&self) -> bool {
        self.defs
            .values()
            .all(|f| f.occurring().iter().all(|x| self.defs.contains_key(x)))
    }

    /// Denoted vertices in order followed by the free variables; this is the
    /// variable order used by the exhaustive solvers.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vars = self.denoted.clone();
        vars.extend(self.free_vars());
        vars
    }

    pub fn has_self_reference(&self) -> bool {
        self.definitions().any(|(v, f)| f.mentions(v))
    }

    /// Edge `s -> s'` iff `s'` occurs in `d(s)`. Open systems need
    /// `include_free`, which adds free variables as sink vertices.
    pub fn dependency_graph(&self, include_free: bool) -> Result<DiGraph, SystemError> {
        let free = self.free_vars();
        if !free.is_empty() && !include_free {
            return Err(SystemError::OpenSystem(free));
        }
        let mut g = DiGraph::with_vertices(self.denoted.iter().cloned().chain(free));
        for (v, f) in self.definitions() {
            for target in f.occurring() {
                g.connect(v.clone(), target);
            }
        }
        Ok(g)
    }

    /// Lists every denoted vertex whose value differs from its formula's.
    pub fn check_acceptable(&self, v: &Valuation) -> Result<AcceptabilityReport, SystemError> {
        for x in self.variables() {
            if !v.contains(&x) {
                return Err(SystemError::PartialValuation(x));
            }
        }
        let mut violations = Vec::new();
        for (x, f) in self.definitions() {
            let expected = f.eval(v).map_err(|_| SystemError::PartialValuation(x.clone()))?;
            let got = v.get(x).unwrap();
            if expected != got {
                violations.push(Violation {
                    vertex: x.clone(),
                    expected,
                    got,
                });
            }
        }
        Ok(AcceptabilityReport {
            acceptable: violations.is_empty(),
            violations,
        })
    }

    /// Canonical source text: optional header, then one definition per line.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "system {}", VarId::new(name));
        }
        for (v, f) in self.definitions() {
            let _ = writeln!(out, "{v} = {f}");
        }
        out
    }
}

/// Rewrites references that fall outside a finite window. `in_range`
/// decides which variables belong to the window.
///
/// Under [`TruncationPolicy::Clip`] an out-of-range literal (a variable or
/// its negation) is removed from its junction and a junction left with one
/// member is replaced by that member; a top-level literal behaves like a
/// one-member conjunction. Grounding replaces each out-of-range variable by
/// the constant.
pub fn apply_boundary_policy(
    template: &Formula,
    in_range: &dyn Fn(&VarId) -> bool,
    policy: TruncationPolicy,
) -> Formula {
    match policy {
        TruncationPolicy::GroundTrue => ground(template, in_range, true),
        TruncationPolicy::GroundFalse => ground(template, in_range, false),
        TruncationPolicy::Clip => {
            if out_of_range_literal(template, in_range) {
                Formula::And(Vec::new())
            } else {
                clip(template, in_range)
            }
        }
    }
}

fn out_of_range_literal(f: &Formula, in_range: &dyn Fn(&VarId) -> bool) -> bool {
    match f {
        Formula::Var(x) => !in_range(x),
        Formula::Not(g) => matches!(&**g, Formula::Var(x) if !in_range(x)),
        _ => false,
    }
}

fn clip(f: &Formula, in_range: &dyn Fn(&VarId) -> bool) -> Formula {
    let junction = |cs: &[Formula], make: fn(Vec<Formula>) -> Formula| {
        let kept: Vec<Formula> = cs
            .iter()
            .filter(|c| !out_of_range_literal(c, in_range))
            .map(|c| clip(c, in_range))
            .collect();
        if kept.len() == 1 && kept.len() < cs.len() {
            kept.into_iter().next().unwrap()
        } else {
            make(kept)
        }
    };
    match f {
        Formula::And(cs) => junction(cs, Formula::And),
        Formula::Or(cs) => junction(cs, Formula::Or),
        Formula::Not(g) => Formula::not(clip(g, in_range)),
        _ => f.clone(),
    }
}

fn ground(f: &Formula, in_range: &dyn Fn(&VarId) -> bool, value: bool) -> Formula {
    match f {
        Formula::Var(x) if !in_range(x) => Formula::constant(value),
        Formula::True | Formula::False | Formula::Var(_) => f.clone(),
        Formula::Not(g) => Formula::not(ground(g, in_range, value)),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| ground(c, in_range, value)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| ground(c, in_range, value)).collect()),
    }
}

/// Parses the system file format: an optional `system <name>` header line,
/// then one `name = formula` line per denoted vertex. Vertex order follows
/// the source.
pub fn parse_system(text: &str, allow_loops: bool) -> Result<DenotationSystem, ParseError> {
    let tokens = tokenize(text)?;
    let mut sys = DenotationSystem {
        name: None,
        denoted: Vec::new(),
        defs: BTreeMap::new(),
    };
    for (n, line) in lines(&tokens).enumerate() {
        if n == 0 && is_header(line) {
            sys.name = Some(name_of(&line[1]).to_string());
            continue;
        }
        let (vertex, formula) = parse_definition(line)?;
        let at = &line[0];
        if sys.defs.contains_key(&vertex) {
            return Err(ParseError::new(
                at.line,
                at.column,
                ParseErrorKind::DuplicateVertex(vertex.as_str().to_string()),
            ));
        }
        if !allow_loops && formula.mentions(&vertex) {
            return Err(ParseError::new(
                at.line,
                at.column,
                ParseErrorKind::SelfReference(vertex.as_str().to_string()),
            ));
        }
        sys.denoted.push(vertex.clone());
        sys.defs.insert(vertex, formula);
    }
    if sys.denoted.is_empty() {
        return Err(ParseError::new(1, 1, ParseErrorKind::EmptyInput));
    }
    Ok(sys)
}

fn is_header(line: &[Token]) -> bool {
    line.len() == 2
        && line[0].kind == TokenKind::Ident("system".to_string())
        && matches!(line[1].kind, TokenKind::Ident(_) | TokenKind::Quoted(_))
}

fn name_of(tok: &Token) -> &str {
    match &tok.kind {
        TokenKind::Ident(s) | TokenKind::Quoted(s) => s,
        _ => unreachable!("caller checked the token kind"),
    }
}

/// Position just past the last token of a line.
pub(crate) fn line_end(line: &[Token]) -> (usize, usize) {
    let last = line.last().expect("lines are non-empty");
    (last.line, last.column + 1)
}

fn parse_definition(line: &[Token]) -> Result<(VarId, Formula), ParseError> {
    let head = &line[0];
    let vertex = match &head.kind {
        TokenKind::Ident(s) if s == "TRUE" || s == "FALSE" => {
            return Err(ParseError::new(
                head.line,
                head.column,
                ParseErrorKind::Unexpected {
                    found: head.kind.to_string(),
                    expected: "a vertex name",
                },
            ))
        }
        TokenKind::Ident(s) | TokenKind::Quoted(s) => VarId::new(s),
        other => {
            return Err(ParseError::new(
                head.line,
                head.column,
                ParseErrorKind::Unexpected {
                    found: other.to_string(),
                    expected: "a vertex name",
                },
            ))
        }
    };
    match line.get(1) {
        Some(t) if t.kind == TokenKind::Eq => {}
        Some(t) => {
            return Err(ParseError::new(
                t.line,
                t.column,
                ParseErrorKind::Unexpected {
                    found: t.kind.to_string(),
                    expected: "`=`",
                },
            ))
        }
        None => {
            let (l, c) = line_end(line);
            return Err(ParseError::new(l, c, ParseErrorKind::UnexpectedEnd { expected: "`=`" }));
        }
    }
    let mut p = FormulaParser::new(&line[2..], line_end(line));
    let formula = p.formula()?;
    p.expect_end()?;
    Ok((vertex, formula))
}
