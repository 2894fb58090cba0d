//! Line-based graph and map files, sharing the tokenizer (identifiers,
//! quoted names, `#` comments) with the system format.
//!
//! * directed graph: `a -> b` per line
//! * undirected graph: `a -- b` per line
//! * vertex map: `a => b` per line
//!
//! In graph files a line holding a single name declares an isolated vertex.
//! Vertex order is order of first appearance.

use std::collections::BTreeSet;

use semdep::graph::VertexMap;
use semdep::lex::{lines, tokenize, ParseErrorKind, Token, TokenKind};
use semdep::{DiGraph, ParseError, UndiGraph, VarId};

/// What a text file holds, judged by its first informative line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    System,
    Graph,
    UndirectedGraph,
    Map,
}

pub fn detect(text: &str) -> Result<InputKind, ParseError> {
    let tokens = tokenize(text)?;
    for (n, line) in lines(&tokens).enumerate() {
        if n == 0 && is_header(line) {
            return Ok(InputKind::System);
        }
        for t in line {
            match t.kind {
                TokenKind::Eq => return Ok(InputKind::System),
                TokenKind::Arrow => return Ok(InputKind::Graph),
                TokenKind::DashDash => return Ok(InputKind::UndirectedGraph),
                TokenKind::FatArrow => return Ok(InputKind::Map),
                _ => {}
            }
        }
    }
    if tokens.iter().all(|t| t.kind == TokenKind::Newline) {
        return Err(ParseError::new(1, 1, ParseErrorKind::EmptyInput));
    }
    Ok(InputKind::Graph)
}

fn is_header(line: &[Token]) -> bool {
    line.len() == 2 && line[0].kind == TokenKind::Ident("system".into()) && name(&line[1]).is_some()
}

fn name(t: &Token) -> Option<VarId> {
    match &t.kind {
        TokenKind::Ident(s) | TokenKind::Quoted(s) => Some(VarId::new(s)),
        _ => None,
    }
}

fn unexpected(t: &Token, expected: &'static str) -> ParseError {
    ParseError::new(
        t.line,
        t.column,
        ParseErrorKind::Unexpected {
            found: t.kind.to_string(),
            expected,
        },
    )
}

/// One parsed line: the names it mentions and where it starts.
enum Line {
    Single(VarId),
    Pair(VarId, VarId),
}

fn parse_lines(
    text: &str,
    sep: &TokenKind,
    expected: &'static str,
    allow_single: bool,
) -> Result<Vec<(Token, Line)>, ParseError> {
    let tokens = tokenize(text)?;
    let mut out = Vec::new();
    for line in lines(&tokens) {
        let first = &line[0];
        let a = name(first).ok_or_else(|| unexpected(first, "a vertex name"))?;
        let parsed = match line {
            [_] if allow_single => Line::Single(a),
            [_] => {
                let end = (first.line, first.column + 1);
                return Err(ParseError::new(
                    end.0,
                    end.1,
                    ParseErrorKind::UnexpectedEnd { expected },
                ));
            }
            [_, s, rest @ ..] => {
                if &s.kind != sep {
                    return Err(unexpected(s, expected));
                }
                let Some(t) = rest.first() else {
                    return Err(ParseError::new(
                        s.line,
                        s.column + 2,
                        ParseErrorKind::UnexpectedEnd {
                            expected: "a vertex name",
                        },
                    ));
                };
                let b = name(t).ok_or_else(|| unexpected(t, "a vertex name"))?;
                if let Some(extra) = rest.get(1) {
                    return Err(unexpected(extra, "end of line"));
                }
                Line::Pair(a, b)
            }
            [] => unreachable!("lines are non-empty"),
        };
        out.push((first.clone(), parsed));
    }
    if out.is_empty() {
        return Err(ParseError::new(1, 1, ParseErrorKind::EmptyInput));
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<DiGraph, ParseError> {
    let mut g = DiGraph::new();
    for (_, line) in parse_lines(text, &TokenKind::Arrow, "`->`", true)? {
        match line {
            Line::Single(a) => {
                g.add_vertex(a);
            }
            Line::Pair(a, b) => {
                g.connect(a, b);
            }
        }
    }
    Ok(g)
}

pub fn parse_undirected(text: &str) -> Result<UndiGraph, ParseError> {
    let mut g = UndiGraph::new();
    for (_, line) in parse_lines(text, &TokenKind::DashDash, "`--`", true)? {
        match line {
            Line::Single(a) => {
                g.add_vertex(a);
            }
            Line::Pair(a, b) => {
                g.connect(a, b);
            }
        }
    }
    Ok(g)
}

/// A map file; a vertex given two images is an error.
pub fn parse_map(text: &str) -> Result<VertexMap, ParseError> {
    let mut map = VertexMap::new();
    for (at, line) in parse_lines(text, &TokenKind::FatArrow, "`=>`", false)? {
        let Line::Pair(a, b) = line else {
            unreachable!("single names are rejected")
        };
        if map.contains_key(&a) {
            return Err(ParseError::new(
                at.line,
                at.column,
                ParseErrorKind::DuplicateVertex(a.as_str().into()),
            ));
        }
        map.insert(a, b);
    }
    Ok(map)
}

/// Edges in vertex order; vertices without any edge on their own line.
pub fn write_graph(g: &DiGraph) -> String {
    let mut touched = BTreeSet::new();
    let mut out = String::new();
    for (a, b) in g.edges() {
        touched.insert(a.clone());
        touched.insert(b.clone());
        out.push_str(&format!("{a} -> {b}\n"));
    }
    let isolated: String = g
        .vertices()
        .iter()
        .filter(|v| !touched.contains(*v))
        .map(|v| format!("{v}\n"))
        .collect();
    isolated + &out
}

pub fn write_undirected(g: &UndiGraph) -> String {
    let mut touched = BTreeSet::new();
    let mut out = String::new();
    for (a, b) in g.edges() {
        touched.insert(a.clone());
        touched.insert(b.clone());
        out.push_str(&format!("{a} -- {b}\n"));
    }
    let isolated: String = g
        .vertices()
        .iter()
        .filter(|v| !touched.contains(*v))
        .map(|v| format!("{v}\n"))
        .collect();
    isolated + &out
}

pub fn write_map(map: &VertexMap) -> String {
    map.iter().map(|(a, b)| format!("{a} => {b}\n")).collect()
}
