//! Searching for acceptable valuations.
//!
//! [`solve_brute`] is the exhaustive oracle. The other solvers exploit the
//! shape of the dependency graph: cycle-free ([`solve_topological`]), simply
//! connected ([`solve_simply_connected`]), disjoint successor chains
//! ([`solve_chain`]) and transitive graphs with negated-conjunction
//! denotations ([`yablo_like_check`]).
//!
//! Ties are broken deterministically: vertices in system order, `true`
//! before `false` for free choices, and the lexicographically least
//! successor assignment (false < true, first successor most significant).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Compiled, Formula, FormulaError, Valuation, VarId, DEFAULT_RELEVANCE_CAP};
use crate::graph::DiGraph;
use crate::system::{DenotationSystem, SystemError};

/// Largest number of variables (denoted and free) the exhaustive solvers
/// accept.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("{count} variables exceed the brute-force budget of {max}")]
    Budget { count: usize, max: usize },
    #[error("dependency graph has a directed cycle")]
    Cyclic,
    #[error("dependency graph is not simply connected")]
    NotSimplyConnected,
    #[error("not a chain system: {0}")]
    NotChain(String),
    #[error("graph is not transitive")]
    NotTransitive,
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Acceptable,
    Paradoxical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    Brute,
    Topological,
    SimplyConnected,
    Chain,
    YabloLike,
}

impl SolveMethod {
    pub fn tag(self) -> &'static str {
        match self {
            SolveMethod::Brute => "brute",
            SolveMethod::Topological => "topo",
            SolveMethod::SimplyConnected => "simply",
            SolveMethod::Chain => "chain",
            SolveMethod::YabloLike => "yablo-like",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub valuations_tried: u64,
    pub edges_erased: usize,
    pub choices_made: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Present iff the status is acceptable.
    pub valuation: Option<Valuation>,
    pub method: SolveMethod,
    pub stats: SolveStats,
}

impl SolveOutcome {
    fn acceptable(valuation: Valuation, method: SolveMethod, stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Acceptable,
            valuation: Some(valuation),
            method,
            stats,
        }
    }

    pub fn is_acceptable(&self) -> bool {
        self.status == SolveStatus::Acceptable
    }
}

/// Formulas of a system compiled against its variable order; variable `k`
/// of `n` is bit `n - 1 - k`, so counting upwards enumerates valuations
/// lexicographically with the first variable most significant.
struct Exhaustive {
    vars: Vec<VarId>,
    /// (bit of the denoted vertex, its formula)
    defs: Vec<(u32, Compiled)>,
}

impl Exhaustive {
    fn new(sys: &DenotationSystem) -> Result<Self, SolveError> {
        let vars = sys.variables();
        let n = vars.len();
        if n > BRUTE_FORCE_MAX_VARS {
            return Err(SolveError::Budget {
                count: n,
                max: BRUTE_FORCE_MAX_VARS,
            });
        }
        let bit: BTreeMap<&VarId, usize> = vars.iter().enumerate().map(|(k, v)| (v, n - 1 - k)).collect();
        let defs = sys
            .definitions()
            .map(|(v, f)| Ok((bit[v] as u32, Compiled::compile(f, &|x| bit.get(x).copied())?)))
            .collect::<Result<Vec<_>, FormulaError>>()?;
        Ok(Exhaustive { vars, defs })
    }

    fn accepts(&self, word: u64) -> bool {
        self.defs.iter().all(|(b, f)| f.eval(word) == (word >> b & 1 == 1))
    }

    fn valuation(&self, word: u64) -> Valuation {
        let n = self.vars.len();
        self.vars
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), word >> (n - 1 - k) & 1 == 1))
            .collect()
    }

    fn words(&self) -> core::ops::Range<u64> {
        0..1u64 << self.vars.len()
    }
}

/// Exhaustive search; returns the lexicographically first acceptable
/// valuation, or `Paradoxical` after trying all of them.
pub fn solve_brute(sys: &DenotationSystem) -> Result<SolveOutcome, SolveError> {
    let ex = Exhaustive::new(sys)?;
    let mut stats = SolveStats::default();
    for word in ex.words() {
        stats.valuations_tried += 1;
        if ex.accepts(word) {
            return Ok(SolveOutcome::acceptable(ex.valuation(word), SolveMethod::Brute, stats));
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Paradoxical,
        valuation: None,
        method: SolveMethod::Brute,
        stats,
    })
}

/// All acceptable valuations in lexicographic order.
pub fn enumerate_acceptable(sys: &DenotationSystem) -> Result<Vec<Valuation>, SolveError> {
    let ex = Exhaustive::new(sys)?;
    Ok(ex.words().filter(|&w| ex.accepts(w)).map(|w| ex.valuation(w)).collect())
}

/// Cycle-free systems: free variables are all set to `false`, then values
/// propagate from the sinks upward.
pub fn solve_topological(sys: &DenotationSystem) -> Result<SolveOutcome, SolveError> {
    solve_topological_with(sys, &|_| false)
}

/// As [`solve_topological`] with the free-variable values given by `choice`.
/// The result is the unique acceptable extension of that choice.
pub fn solve_topological_with(
    sys: &DenotationSystem,
    choice: &dyn Fn(&VarId) -> bool,
) -> Result<SolveOutcome, SolveError> {
    let g = sys.dependency_graph(true)?;
    let order = g.sinks_first_order().ok_or(SolveError::Cyclic)?;
    let mut values = Valuation::new();
    let mut stats = SolveStats::default();
    for i in order {
        let v = &g.vertices()[i];
        let value = match sys.formula(v) {
            Some(f) => f.eval(&values)?,
            None => {
                stats.choices_made += 1;
                choice(v)
            }
        };
        values.insert(v.clone(), value);
    }
    Ok(SolveOutcome::acceptable(values, SolveMethod::Topological, stats))
}

/// Constructive solver for simply connected, cycle-free dependency graphs
/// (free variables included as sinks).
///
/// The local step replaces irrelevant successors by `true`, erasing their
/// edges, and fixes every vertex whose formula has become constant,
/// substituting its value into the predecessors and isolating it. The
/// choice step sets the first undetermined non-isolated vertex to `true`,
/// substitutes it into its predecessors, and gives its successors the least
/// assignment realizing that value; each successor is then handled the
/// same way with its forced value. Because the graph is simply connected,
/// every erased edge splits off an independent fragment.
pub fn solve_simply_connected(sys: &DenotationSystem) -> Result<SolveOutcome, SolveError> {
    let graph = sys.dependency_graph(true)?;
    if !graph.is_simply_connected() {
        return Err(SolveError::NotSimplyConnected);
    }
    if !graph.is_cycle_free() {
        return Err(SolveError::Cyclic);
    }
    let mut work = Fragments {
        defs: sys.definitions().map(|(v, f)| (v.clone(), f.clone())).collect(),
        graph,
        values: Valuation::new(),
        stats: SolveStats::default(),
    };
    work.local(sys.denoted().to_vec())?;

    let order = sys.variables();
    loop {
        let next = order.iter().find(|v| {
            !work.values.contains(v) && {
                let i = work.graph.index_of(v).unwrap();
                !work.graph.succ_indices(i).is_empty() || !work.graph.pred_indices(i).is_empty()
            }
        });
        let Some(x) = next.cloned() else { break };
        work.stats.choices_made += 1;
        work.assign(x, true)?;
    }
    // Isolated and still open: free variables nothing depends on any more.
    for v in &order {
        if !work.values.contains(v) {
            debug_assert!(!sys.is_denoted(v), "denoted vertex left undetermined");
            work.stats.choices_made += 1;
            work.values.insert(v.clone(), true);
        }
    }
    debug_assert!(sys
        .check_acceptable(&work.values)
        .map(|r| r.acceptable)
        .unwrap_or(false));
    Ok(SolveOutcome::acceptable(
        work.values,
        SolveMethod::SimplyConnected,
        work.stats,
    ))
}

/// Working copy for [`solve_simply_connected`]. Invariant: a determined
/// vertex is isolated, and for every undetermined denoted vertex the
/// outgoing edges are exactly the variables occurring in its formula.
struct Fragments {
    defs: BTreeMap<VarId, Formula>,
    graph: DiGraph,
    values: Valuation,
    stats: SolveStats,
}

impl Fragments {
    fn erase(&mut self, from: &VarId, to: &VarId) {
        if self.graph.remove_edge(from, to) {
            self.stats.edges_erased += 1;
        }
    }

    /// Local simplification, run to a fixpoint from the given vertices.
    fn local(&mut self, mut queue: Vec<VarId>) -> Result<(), SolveError> {
        while let Some(x) = queue.pop() {
            if self.values.contains(&x) {
                continue;
            }
            let Some(f) = self.defs.get(&x) else { continue };
            let occurring = f.occurring();
            let relevant = match f.relevant(DEFAULT_RELEVANCE_CAP) {
                Ok(r) => r,
                Err(FormulaError::CapExceeded { .. }) => occurring.clone(),
                Err(e) => return Err(e.into()),
            };
            let mut f = f.clone();
            for y in occurring.difference(&relevant) {
                f = f.substitute(y, true);
            }
            let f = f.simplify();
            // drop edges to anything folding removed
            let still = f.occurring();
            for y in self.graph.succ(&x).expect("vertex of the working graph") {
                if !still.contains(&y) {
                    self.erase(&x, &y);
                }
            }
            let constant = f.as_constant();
            self.defs.insert(x.clone(), f);
            if let Some(c) = constant {
                self.values.insert(x.clone(), c);
                queue.extend(self.substitute_into_predecessors(&x, c));
            }
        }
        Ok(())
    }

    fn substitute_into_predecessors(&mut self, x: &VarId, value: bool) -> Vec<VarId> {
        let preds = self.graph.pred(x).expect("vertex of the working graph");
        for p in &preds {
            let f = self.defs[p].substitute(x, value).simplify();
            self.defs.insert(p.clone(), f);
            self.erase(p, x);
        }
        preds
    }

    /// Gives `x` the value `value` and propagates through its fragment.
    fn assign(&mut self, x: VarId, value: bool) -> Result<(), SolveError> {
        let mut pending = alloc::vec![(x, value)];
        while let Some((x, value)) = pending.pop() {
            self.values.insert(x.clone(), value);
            let touched = self.substitute_into_predecessors(&x, value);

            if let Some(f) = self.defs.get(&x).cloned() {
                let succs = self.graph.succ(&x).expect("vertex of the working graph");
                let table = f.truth_table(&succs, DEFAULT_RELEVANCE_CAP)?;
                let m = succs.len();
                let row = table
                    .iter()
                    .position(|&b| b == value)
                    .expect("formulas left by the local step are not constant");
                for (k, s) in succs.iter().enumerate().rev() {
                    self.erase(&x, s);
                    pending.push((s.clone(), row >> (m - 1 - k) & 1 == 1));
                }
            }
            self.local(touched)?;
        }
        Ok(())
    }
}

/// Semantic form of a chain vertex relative to its successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    Same,
    Negated,
    Constant(bool),
}

/// Systems whose graph (free variables as sinks) is a disjoint union of
/// directed paths. Constants split each path into segments; values flow
/// from each segment's anchor (a constant, or the free end of the path,
/// which takes `false`) toward smaller indices.
pub fn solve_chain(sys: &DenotationSystem) -> Result<SolveOutcome, SolveError> {
    solve_chain_with(sys, &|_| false)
}

pub fn solve_chain_with(sys: &DenotationSystem, choice: &dyn Fn(&VarId) -> bool) -> Result<SolveOutcome, SolveError> {
    let g = sys.dependency_graph(true)?;
    for v in g.vertices() {
        let i = g.index_of(v).unwrap();
        if g.succ_indices(i).len() > 1 {
            return Err(SolveError::NotChain(alloc::format!(
                "`{v}` has more than one successor"
            )));
        }
        if g.pred_indices(i).len() > 1 {
            return Err(SolveError::NotChain(alloc::format!(
                "`{v}` has more than one predecessor"
            )));
        }
    }
    if !g.is_cycle_free() {
        return Err(SolveError::Cyclic);
    }

    let mut values = Valuation::new();
    let mut stats = SolveStats::default();
    let starts = (0..g.vertex_count()).filter(|&i| g.pred_indices(i).is_empty());
    for start in starts {
        let mut path = alloc::vec![start];
        while let Some(&next) = g.succ_indices(*path.last().unwrap()).first() {
            path.push(next);
        }
        let links = path
            .iter()
            .map(|&i| {
                let v = &g.vertices()[i];
                let Some(f) = sys.formula(v) else { return Ok(None) };
                let succ: Vec<VarId> = g.succ_indices(i).iter().map(|&j| g.vertices()[j].clone()).collect();
                let table = f.truth_table(&succ, DEFAULT_RELEVANCE_CAP)?;
                Ok(Some(match table.as_slice() {
                    [c] => Link::Constant(*c),
                    [a, b] if a == b => Link::Constant(*a),
                    [false, true] => Link::Same,
                    _ => Link::Negated,
                }))
            })
            .collect::<Result<Vec<Option<Link>>, SolveError>>()?;

        // walk down from the end of the path: each constant starts a new
        // segment, the free end anchors the top segment
        let mut carried = false;
        for (pos, &i) in path.iter().enumerate().rev() {
            let v = &g.vertices()[i];
            let value = match links[pos] {
                None => {
                    stats.choices_made += 1;
                    choice(v)
                }
                Some(Link::Constant(c)) => c,
                Some(Link::Same) => carried,
                Some(Link::Negated) => !carried,
            };
            values.insert(v.clone(), value);
            carried = value;
        }
    }
    Ok(SolveOutcome::acceptable(values, SolveMethod::Chain, stats))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YabloLikeVerdict {
    /// A vertex with successors all of which have successors; the induced
    /// negated-conjunction system has no acceptable valuation.
    ParadoxWitness(VarId),
    /// True exactly at the vertices without successors.
    SafeValuation(Valuation),
}

/// Decides the negated-conjunction system of a transitive graph by the
/// successor criterion alone.
pub fn yablo_like_check(g: &DiGraph) -> Result<YabloLikeVerdict, SolveError> {
    if !g.is_transitive() {
        return Err(SolveError::NotTransitive);
    }
    let has_succ = |i: usize| !g.succ_indices(i).is_empty();
    let witness = (0..g.vertex_count()).find(|&i| has_succ(i) && g.succ_indices(i).iter().all(|&j| has_succ(j)));
    Ok(match witness {
        Some(i) => YabloLikeVerdict::ParadoxWitness(g.vertices()[i].clone()),
        None => YabloLikeVerdict::SafeValuation(
            (0..g.vertex_count())
                .map(|i| (g.vertices()[i].clone(), !has_succ(i)))
                .collect(),
        ),
    })
}

/// `d(x)` is the conjunction of the negated successors of `x`, in vertex
/// order; loops are admitted.
pub fn induced_andnot_system(g: &DiGraph) -> DenotationSystem {
    let defs = g.vertices().iter().map(|v| {
        let succ = g.succ(v).expect("own vertex");
        (v.clone(), Formula::conjoin(succ.into_iter().map(Formula::neg)))
    });
    DenotationSystem::new(defs, true).expect("vertices of a graph are distinct")
}
