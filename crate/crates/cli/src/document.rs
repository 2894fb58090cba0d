//! The JSON result document printed by every command.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use semdep::danger::{DenotationCandidate, OrientationReport};
use semdep::solve::SolveStats;
use semdep::{DangerLimits, DangerReport, DiGraph, SolveOutcome, SolveStatus, Valuation, VarId};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Field order is the serialization order; `timing_ms` stays last so it can
/// be dropped when comparing runs.
#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub tool_version: String,
    pub command: String,
    pub input_digest: String,
    pub payload: Value,
    pub timing_ms: f64,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// `sha256:` digest over the inputs, each prefixed by its length so that
/// different splits of the same bytes differ.
pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

/// Name → value in the given vertex order.
pub fn valuation_json(order: &[VarId], v: &Valuation) -> Value {
    let mut map = Map::new();
    for x in order {
        if let Some(b) = v.get(x) {
            map.insert(x.as_str().to_string(), Value::Bool(b));
        }
    }
    Value::Object(map)
}

pub fn stats_json(s: &SolveStats) -> Value {
    json!({
        "valuations_tried": s.valuations_tried,
        "edges_erased": s.edges_erased,
        "choices_made": s.choices_made,
    })
}

pub fn outcome_json(order: &[VarId], out: &SolveOutcome) -> Value {
    json!({
        "status": status_tag(out.status),
        "method": out.method.tag(),
        "valuation": out.valuation.as_ref().map(|v| valuation_json(order, v)),
        "stats": stats_json(&out.stats),
    })
}

pub fn status_tag(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Acceptable => "acceptable",
        SolveStatus::Paradoxical => "paradoxical",
    }
}

pub fn limits_json(l: &DangerLimits) -> Value {
    json!({ "max_vertices": l.max_vertices, "max_out_degree": l.max_out_degree })
}

/// Witness tables as bit-strings, row 0 (all successors false) first, with
/// the successor order that fixes the columns.
pub fn candidate_json(g: &DiGraph, c: &DenotationCandidate) -> Value {
    let mut tables = Map::new();
    for v in g.vertices() {
        let succ: Vec<String> = g
            .succ(v)
            .expect("own vertex")
            .iter()
            .map(|s| s.as_str().to_string())
            .collect();
        tables.insert(
            v.as_str().to_string(),
            json!({ "successors": succ, "table": c.bits(v).unwrap_or_default() }),
        );
    }
    Value::Object(tables)
}

pub fn danger_json(g: &DiGraph, r: &DangerReport) -> Value {
    json!({
        "dangerous": r.dangerous,
        "witness": r.witness.as_ref().map(|w| candidate_json(g, w)),
        "candidates_tried": r.candidates_tried,
        "limits": limits_json(&r.limits),
    })
}

pub fn edges_json(g: &DiGraph) -> Value {
    Value::Array(g.edges().map(|(a, b)| json!([a.as_str(), b.as_str()])).collect())
}

pub fn orientation_json(r: &OrientationReport, limits: &DangerLimits) -> Value {
    json!({
        "exists": r.exists,
        "orientations_tried": r.orientations_tried,
        "witness": r.witness.as_ref().map(|(g, d)| json!({
            "edges": edges_json(g),
            "danger": danger_json(g, d),
        })),
        "limits": limits_json(limits),
    })
}
