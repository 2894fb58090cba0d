//! Graphviz output. Node names are written verbatim inside double quotes.

use std::fmt::Write;

use semdep::{DenotationSystem, DiGraph, Formula, VarId};

/// Attribute put on negation-marked edges.
pub const NEGATION_ATTR: &str = "[color=red, arrowhead=tee, label=\"¬\"]";

fn quote(v: &VarId) -> String {
    let mut out = String::from("\"");
    for c in v.as_str().chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Whether `x` occurs in `f` under an odd number of negations.
pub fn occurs_negated(f: &Formula, x: &VarId) -> bool {
    fn walk(f: &Formula, x: &VarId, negated: bool) -> bool {
        match f {
            Formula::True | Formula::False => false,
            Formula::Var(v) => negated && v == x,
            Formula::Not(g) => walk(g, x, !negated),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| walk(c, x, negated)),
        }
    }
    walk(f, x, false)
}

/// Renders `g`. With `system` given, an edge `a -> b` is marked when `b`
/// occurs negated in the denotation of `a`. Returns the text and the number
/// of marked edges.
pub fn to_dot(name: &str, g: &DiGraph, system: Option<&DenotationSystem>) -> (String, usize) {
    let mut out = String::new();
    let mut marked = 0;
    writeln!(out, "digraph {} {{", quote(&VarId::new(name))).unwrap();
    for v in g.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for (a, b) in g.edges() {
        let negated = system.and_then(|s| s.formula(a)).is_some_and(|f| occurs_negated(f, b));
        if negated {
            marked += 1;
            writeln!(out, "  {} -> {} {NEGATION_ATTR};", quote(a), quote(b)).unwrap();
        } else {
            writeln!(out, "  {} -> {};", quote(a), quote(b)).unwrap();
        }
    }
    out.push_str("}\n");
    (out, marked)
}
