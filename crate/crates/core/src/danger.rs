//! Exhaustive dangerousness checks for small graphs.
//!
//! A graph is dangerous when some denotation system with exactly that
//! dependency graph has no acceptable valuation. Whether a system has an
//! acceptable valuation depends only on the Boolean function of each
//! denotation, so the search ranges over one truth table per vertex
//! (columns in successor order); [`realize_candidate`] turns a table
//! assignment back into a system whose graph is the input graph.
//!
//! Candidates are visited in a fixed order: the first vertex's table is
//! the most significant digit, and each table counts in binary with row 0
//! (all successors false) as its most significant bit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{Formula, FormulaError, VarId};
use crate::graph::{DiGraph, GraphError, UndiGraph};
use crate::solve::{solve_brute, SolveStatus};
use crate::system::DenotationSystem;

/// Widest candidate space (in table bits summed over all vertices) the
/// search will attempt, whatever the configured limits. The default limits
/// stay within it.
pub const MAX_CANDIDATE_BITS: usize = 40;

/// Largest out-degree the search will attempt, whatever the configured
/// limits: a vertex of out-degree `d` alone has `2^(2^d)` tables.
pub const MAX_SEARCH_OUT_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DangerError {
    #[error("{count} vertices exceed the danger budget of {max}")]
    TooManyVertices { count: usize, max: usize },
    #[error("vertex `{vertex}` has out-degree {degree}, over the danger budget of {max}")]
    OutDegree { vertex: VarId, degree: usize, max: usize },
    #[error("candidate space of 2^{bits} exceeds 2^{max}")]
    SearchSpace { bits: usize, max: usize },
    #[error("candidate has no table for vertex `{0}`")]
    MissingTable(VarId),
    #[error("table for `{vertex}` has {got} rows, expected {expected}")]
    TableLength { vertex: VarId, expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DangerLimits {
    pub max_vertices: usize,
    pub max_out_degree: usize,
}

impl Default for DangerLimits {
    fn default() -> Self {
        DangerLimits {
            max_vertices: 5,
            max_out_degree: 3,
        }
    }
}

/// One truth table per vertex; row `r` assigns successor `k` of `m` the
/// bit `(r >> (m - 1 - k)) & 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DenotationCandidate {
    tables: BTreeMap<VarId, Vec<bool>>,
}

impl DenotationCandidate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: VarId, table: Vec<bool>) {
        self.tables.insert(v, table);
    }

    pub fn table(&self, v: &VarId) -> Option<&[bool]> {
        self.tables.get(v).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &[bool])> {
        self.tables.iter().map(|(v, t)| (v, t.as_slice()))
    }

    /// The table of `v` as `0`/`1` characters, row 0 first.
    pub fn bits(&self, v: &VarId) -> Option<String> {
        self.table(v)
            .map(|t| t.iter().map(|&b| if b { '1' } else { '0' }).collect())
    }

    /// Inverse of [`DenotationCandidate::bits`]; `None` on any other
    /// character.
    pub fn parse_bits(bits: &str) -> Option<Vec<bool>> {
        bits.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect()
    }
}

impl FromIterator<(VarId, Vec<bool>)> for DenotationCandidate {
    fn from_iter<I: IntoIterator<Item = (VarId, Vec<bool>)>>(iter: I) -> Self {
        DenotationCandidate {
            tables: iter.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DangerReport {
    pub dangerous: bool,
    /// Present iff dangerous.
    pub witness: Option<DenotationCandidate>,
    pub candidates_tried: u64,
    pub limits: DangerLimits,
}

/// Builds the system with `d(x) = from_truth_table(succ(x), table(x))`.
/// Every successor occurs syntactically, so the dependency graph of the
/// result is `g` itself (loops admitted).
pub fn realize_candidate(g: &DiGraph, c: &DenotationCandidate) -> Result<DenotationSystem, DangerError> {
    let mut defs = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let table = c.table(v).ok_or_else(|| DangerError::MissingTable(v.clone()))?;
        let succ = g.succ(v)?;
        let expected = 1usize << succ.len();
        if table.len() != expected {
            return Err(DangerError::TableLength {
                vertex: v.clone(),
                expected,
                got: table.len(),
            });
        }
        defs.push((v.clone(), Formula::from_truth_table(&succ, table)?));
    }
    Ok(DenotationSystem::new(defs, true).expect("vertices of a graph are distinct"))
}

fn check_limits(g: &DiGraph, limits: DangerLimits) -> Result<(), DangerError> {
    if g.vertex_count() > limits.max_vertices {
        return Err(DangerError::TooManyVertices {
            count: g.vertex_count(),
            max: limits.max_vertices,
        });
    }
    for (i, v) in g.vertices().iter().enumerate() {
        let degree = g.succ_indices(i).len();
        if degree > limits.max_out_degree {
            return Err(DangerError::OutDegree {
                vertex: v.clone(),
                degree,
                max: limits.max_out_degree,
            });
        }
    }
    Ok(())
}

/// Searches all candidates in order and reports the first one without an
/// acceptable valuation.
///
/// Valuations of the vertices are encoded as words (bit `i` is vertex `i`).
/// Each vertex's table selects the set of words consistent with that
/// vertex's equation; a candidate is paradoxical exactly when the
/// intersection over all vertices is empty. The search walks the candidate
/// order depth-first, so once a prefix already has an empty intersection
/// the first completion (all remaining tables zero) is the witness.
/// Prefixes leading to an intersection already shown to admit no witness
/// at the same depth are skipped, which does not change the result. The
/// witness is re-checked by realizing it and running [`solve_brute`].
pub fn is_dangerous(g: &DiGraph, limits: DangerLimits) -> Result<DangerReport, DangerError> {
    check_limits(g, limits)?;
    let n = g.vertex_count();
    let degrees: Vec<usize> = (0..n).map(|i| g.succ_indices(i).len()).collect();
    let bits: usize = degrees.iter().map(|&d| 1usize << d).sum();
    // words are held in a u64 mask, so at most 6 vertices
    let widest = degrees.iter().copied().max().unwrap_or(0);
    if bits > MAX_CANDIDATE_BITS || widest > MAX_SEARCH_OUT_DEGREE || n > 6 {
        return Err(DangerError::SearchSpace {
            bits,
            max: MAX_CANDIDATE_BITS,
        });
    }

    let words = 1usize << n;
    let all_words: u64 = if words == 64 { u64::MAX } else { (1u64 << words) - 1 };
    // rows[i][r] = (words where vertex i is true and sees row r,
    //               words where vertex i is false and sees row r)
    let rows: Vec<Vec<(u64, u64)>> = (0..n)
        .map(|i| {
            let succ: Vec<usize> = g.succ_indices(i).iter().copied().collect();
            let mut rows = vec![(0u64, 0u64); 1 << succ.len()];
            for w in 0..words {
                let row = succ.iter().fold(0usize, |r, &s| r << 1 | (w >> s & 1));
                if w >> i & 1 == 1 {
                    rows[row].0 |= 1 << w;
                } else {
                    rows[row].1 |= 1 << w;
                }
            }
            rows
        })
        .collect();

    // weight of a unit step in vertex i's table within the candidate index
    let mut weight = vec![0u32; n];
    let mut shift = 0u32;
    for i in (0..n).rev() {
        weight[i] = shift;
        shift += 1 << degrees[i];
    }

    let mut search = Search {
        rows: &rows,
        exhausted: vec![BTreeSet::new(); n],
        chosen: vec![0u64; n],
    };
    let found = search.run(0, all_words);
    let mut chosen = search.chosen;
    let (dangerous, candidates_tried) = match found {
        Some(depth) => {
            let index: u64 = (0..depth).map(|i| chosen[i] << weight[i]).sum();
            for t in &mut chosen[depth..] {
                *t = 0;
            }
            (true, index + 1)
        }
        None => (false, 1u64 << bits),
    };
    let witness = dangerous.then(|| {
        (0..n)
            .map(|i| {
                let size = 1usize << degrees[i];
                let table = (0..size).map(|r| chosen[i] >> (size - 1 - r) & 1 == 1).collect();
                (g.vertices()[i].clone(), table)
            })
            .collect::<DenotationCandidate>()
    });
    if let Some(w) = &witness {
        let sys = realize_candidate(g, w)?;
        let verdict = solve_brute(&sys).expect("danger budgets are within the brute-force budget");
        assert_eq!(
            verdict.status,
            SolveStatus::Paradoxical,
            "danger witness failed re-verification"
        );
    }
    Ok(DangerReport {
        dangerous,
        witness,
        candidates_tried,
        limits,
    })
}

/// Depth-first walk in candidate order over the per-vertex tables.
struct Search<'a> {
    rows: &'a [Vec<(u64, u64)>],
    /// Masks already known to admit no witness below a given depth.
    exhausted: Vec<BTreeSet<u64>>,
    chosen: Vec<u64>,
}

impl Search<'_> {
    /// Words consistent with vertex `i` under table `t` (row 0 is the most
    /// significant bit of `t`).
    fn consistent(&self, i: usize, t: u64) -> u64 {
        let rows = &self.rows[i];
        let size = rows.len();
        rows.iter()
            .enumerate()
            .map(|(r, &(ones, zeros))| if t >> (size - 1 - r) & 1 == 1 { ones } else { zeros })
            .fold(0, |acc, m| acc | m)
    }

    /// Returns the depth at which the running intersection first became
    /// empty, leaving the tables chosen up to that depth in `chosen`.
    fn run(&mut self, depth: usize, mask: u64) -> Option<usize> {
        if mask == 0 {
            return Some(depth);
        }
        if depth == self.rows.len() || self.exhausted[depth].contains(&mask) {
            return None;
        }
        for t in 0..1u64 << self.rows[depth].len() {
            self.chosen[depth] = t;
            let next = mask & self.consistent(depth, t);
            if let Some(d) = self.run(depth + 1, next) {
                return Some(d);
            }
        }
        self.exhausted[depth].insert(mask);
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationReport {
    pub exists: bool,
    /// The first dangerous orientation, with its danger report.
    pub witness: Option<(DiGraph, DangerReport)>,
    pub orientations_tried: u64,
}

/// Tries the orientations of `u` in order and stops at the first dangerous
/// one. An orientation outside the danger budget is an error.
pub fn dangerous_orientation_exists(u: &UndiGraph, limits: DangerLimits) -> Result<OrientationReport, DangerError> {
    let mut tried = 0;
    for g in u.orientations()? {
        tried += 1;
        let report = is_dangerous(&g, limits)?;
        if report.dangerous {
            return Ok(OrientationReport {
                exists: true,
                witness: Some((g, report)),
                orientations_tried: tried,
            });
        }
    }
    Ok(OrientationReport {
        exists: false,
        witness: None,
        orientations_tried: tried,
    })
}
