//! Finite directed graphs over [`VarId`] vertices and their undirected
//! shadows.
//!
//! Vertex order is insertion order and is used wherever a deterministic
//! order is needed (successor lists, components, topological order).
//! Equality of graphs is equality of the vertex set and edge set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::VarId;

/// Largest edge count accepted by [`UndiGraph::orientations`].
pub const MAX_ORIENTATION_EDGES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VarId),
    #[error("map has no image for vertex `{0}`")]
    PartialMap(VarId),
    #[error("image `{image}` of `{vertex}` is not a vertex of the target graph")]
    ImageOutsideTarget { vertex: VarId, image: VarId },
    #[error("collapsing edge {from} -> {to} would create a loop at `{image}`")]
    CollapseLoop { from: VarId, to: VarId, image: VarId },
    #[error("{edges} edges exceed the orientation budget of {max}")]
    EdgeBudget { edges: usize, max: usize },
}

/// Map between vertex sets, as used for homomorphisms and collapses.
pub type VertexMap = BTreeMap<VarId, VarId>;

#[derive(Clone, Debug, Default)]
pub struct DiGraph {
    vertices: Vec<VarId>,
    index: BTreeMap<VarId, usize>,
    succ: Vec<BTreeSet<usize>>,
    pred: Vec<BTreeSet<usize>>,
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.index.keys().eq(other.index.keys())
            && self.edge_set() == other.edge_set()
    }
}

impl Eq for DiGraph {}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = VarId>) -> Self {
        let mut g = DiGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    /// Builds a graph from an edge list, adding endpoints in order of first
    /// appearance.
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = DiGraph::new();
        for (a, b) in edges {
            g.connect(VarId::new(a), VarId::new(b));
        }
        g
    }

    /// Adds `v` if absent and returns its index.
    pub fn add_vertex(&mut self, v: VarId) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(v.clone(), i);
        self.vertices.push(v);
        self.succ.push(BTreeSet::new());
        self.pred.push(BTreeSet::new());
        i
    }

    /// Adds the edge, requiring both endpoints to exist. Returns whether the
    /// edge was new.
    pub fn add_edge(&mut self, from: &VarId, to: &VarId) -> Result<bool, GraphError> {
        let (a, b) = (self.require(from)?, self.require(to)?);
        Ok(self.insert_edge(a, b))
    }

    /// Adds the edge, creating missing endpoints.
    pub fn connect(&mut self, from: VarId, to: VarId) -> bool {
        let a = self.add_vertex(from);
        let b = self.add_vertex(to);
        self.insert_edge(a, b)
    }

    pub fn remove_edge(&mut self, from: &VarId, to: &VarId) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => {
                self.pred[b].remove(&a);
                self.succ[a].remove(&b)
            }
            _ => false,
        }
    }

    fn insert_edge(&mut self, a: usize, b: usize) -> bool {
        self.pred[b].insert(a);
        self.succ[a].insert(b)
    }

    fn require(&self, v: &VarId) -> Result<usize, GraphError> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    pub fn index_of(&self, v: &VarId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn vertices(&self) -> &[VarId] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: &VarId) -> bool {
        self.index.contains_key(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, from: &VarId, to: &VarId) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.succ[a].contains(&b),
            _ => false,
        }
    }

    /// Edges ordered by source then target vertex order.
    pub fn edges(&self) -> impl Iterator<Item = (&VarId, &VarId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(move |(a, ts)| ts.iter().map(move |&b| (&self.vertices[a], &self.vertices[b])))
    }

    fn edge_set(&self) -> BTreeSet<(&VarId, &VarId)> {
        self.edges().collect()
    }

    pub(crate) fn succ_indices(&self, i: usize) -> &BTreeSet<usize> {
        &self.succ[i]
    }

    pub(crate) fn pred_indices(&self, i: usize) -> &BTreeSet<usize> {
        &self.pred[i]
    }

    /// Successors of `x` in vertex order.
    pub fn succ(&self, x: &VarId) -> Result<Vec<VarId>, GraphError> {
        let i = self.require(x)?;
        Ok(self.succ[i].iter().map(|&j| self.vertices[j].clone()).collect())
    }

    /// Predecessors of `x` in vertex order.
    pub fn pred(&self, x: &VarId) -> Result<Vec<VarId>, GraphError> {
        let i = self.require(x)?;
        Ok(self.pred[i].iter().map(|&j| self.vertices[j].clone()).collect())
    }

    pub fn out_degree(&self, x: &VarId) -> Result<usize, GraphError> {
        Ok(self.succ[self.require(x)?].len())
    }

    pub fn max_out_degree(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    fn reachable_from(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = self.succ[start].iter().copied().collect();
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(self.succ[i].iter().copied());
            }
        }
        seen
    }

    /// Vertices reachable from `x` by a non-empty path, in vertex order.
    /// `x` itself is included only if it lies on a cycle.
    pub fn downward(&self, x: &VarId) -> Result<Vec<VarId>, GraphError> {
        let i = self.require(x)?;
        Ok(self
            .reachable_from(i)
            .into_iter()
            .map(|j| self.vertices[j].clone())
            .collect())
    }

    /// Subgraph induced by `x` and everything downward from it.
    pub fn cone(&self, x: &VarId) -> Result<DiGraph, GraphError> {
        let i = self.require(x)?;
        let mut keep = self.reachable_from(i);
        keep.insert(i);
        Ok(self.induced_by_indices(&keep))
    }

    /// Subgraph induced by the given vertices (unknown ones are ignored).
    pub fn induced(&self, vertices: &[VarId]) -> DiGraph {
        let keep: BTreeSet<usize> = vertices.iter().filter_map(|v| self.index_of(v)).collect();
        self.induced_by_indices(&keep)
    }

    fn induced_by_indices(&self, keep: &BTreeSet<usize>) -> DiGraph {
        let mut g = DiGraph::with_vertices(keep.iter().map(|&i| self.vertices[i].clone()));
        for &a in keep {
            for &b in self.succ[a].intersection(keep) {
                g.connect(self.vertices[a].clone(), self.vertices[b].clone());
            }
        }
        g
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.vertex_count()).all(|a| {
            self.succ[a]
                .iter()
                .all(|&b| self.succ[b].iter().all(|c| self.succ[a].contains(c)))
        })
    }

    /// Least transitive supergraph on the same vertices.
    pub fn transitive_closure(&self) -> DiGraph {
        let mut g = self.clone();
        for a in 0..self.vertex_count() {
            for b in self.reachable_from(a) {
                g.insert_edge(a, b);
            }
        }
        g
    }

    pub fn has_loop(&self) -> bool {
        (0..self.vertex_count()).any(|i| self.succ[i].contains(&i))
    }

    /// Vertex indices in an order where every edge goes from a later to an
    /// earlier position (sinks first). `None` if the graph has a cycle.
    pub(crate) fn sinks_first_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut remaining: Vec<usize> = self.succ.iter().map(BTreeSet::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| remaining[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &p in &self.pred[i] {
                remaining[p] -= 1;
                if remaining[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Topological order (every edge points forward), ties broken by vertex
    /// order. `None` if the graph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<VarId>> {
        let n = self.vertex_count();
        let mut remaining: Vec<usize> = self.pred.iter().map(BTreeSet::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| remaining[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(self.vertices[i].clone());
            for &s in &self.succ[i] {
                remaining[s] -= 1;
                if remaining[s] == 0 {
                    ready.insert(s);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// No directed cycle; loops and 2-cycles count as cycles.
    pub fn is_cycle_free(&self) -> bool {
        self.sinks_first_order().is_some()
    }

    pub fn underlying(&self) -> UndiGraph {
        let mut u = UndiGraph::with_vertices(self.vertices.iter().cloned());
        for (a, b) in self.edges() {
            u.connect(a.clone(), b.clone());
        }
        u
    }

    /// At most one undirected path between any two vertices: no loops, no
    /// anti-parallel pair, and the undirected shadow is a forest.
    pub fn is_simply_connected(&self) -> bool {
        let anti_parallel = (0..self.vertex_count()).any(|a| self.succ[a].iter().any(|&b| self.succ[b].contains(&a)));
        !self.has_loop() && !anti_parallel && !self.underlying().has_undirected_cycle()
    }

    /// Weakly connected components with their induced edges, ordered by the
    /// first vertex of each component.
    pub fn components(&self) -> Vec<DiGraph> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut classes: Vec<BTreeSet<usize>> = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut class = BTreeSet::new();
            let mut stack = vec![start];
            label[start] = c;
            while let Some(i) = stack.pop() {
                class.insert(i);
                for &j in self.succ[i].iter().chain(self.pred[i].iter()) {
                    if label[j] == usize::MAX {
                        label[j] = c;
                        stack.push(j);
                    }
                }
            }
            classes.push(class);
        }
        classes.iter().map(|c| self.induced_by_indices(c)).collect()
    }

    /// First edge of `self` whose image under `f` is not an edge of `h`, or
    /// `None` if `f` is a homomorphism.
    pub fn homomorphism_violation(&self, h: &DiGraph, f: &VertexMap) -> Result<Option<(VarId, VarId)>, GraphError> {
        for v in &self.vertices {
            let image = f.get(v).ok_or_else(|| GraphError::PartialMap(v.clone()))?;
            if !h.contains_vertex(image) {
                return Err(GraphError::ImageOutsideTarget {
                    vertex: v.clone(),
                    image: image.clone(),
                });
            }
        }
        Ok(self
            .edges()
            .find(|(a, b)| !h.has_edge(&f[*a], &f[*b]))
            .map(|(a, b)| (a.clone(), b.clone())))
    }

    pub fn is_homomorphism(&self, h: &DiGraph, f: &VertexMap) -> Result<bool, GraphError> {
        Ok(self.homomorphism_violation(h, f)?.is_none())
    }

    /// Image graph of `f`: vertices in order of first image, one edge per
    /// edge of `self`. An edge whose endpoints share an image is an error.
    pub fn collapse(&self, f: &VertexMap) -> Result<DiGraph, GraphError> {
        let mut out = DiGraph::new();
        for v in &self.vertices {
            out.add_vertex(f.get(v).ok_or_else(|| GraphError::PartialMap(v.clone()))?.clone());
        }
        for (a, b) in self.edges() {
            let (fa, fb) = (&f[a], &f[b]);
            if fa == fb {
                return Err(GraphError::CollapseLoop {
                    from: a.clone(),
                    to: b.clone(),
                    image: fa.clone(),
                });
            }
            out.connect(fa.clone(), fb.clone());
        }
        Ok(out)
    }
}

/// Undirected graph; a self-pair only appears when explicitly added.
#[derive(Clone, Debug, Default)]
pub struct UndiGraph {
    vertices: Vec<VarId>,
    index: BTreeMap<VarId, usize>,
    /// Normalized so that `a <= b`.
    edges: BTreeSet<(usize, usize)>,
}

impl PartialEq for UndiGraph {
    fn eq(&self, other: &Self) -> bool {
        let names = |g: &UndiGraph| -> BTreeSet<(VarId, VarId)> {
            g.edges()
                .map(|(a, b)| {
                    if a <= b {
                        (a.clone(), b.clone())
                    } else {
                        (b.clone(), a.clone())
                    }
                })
                .collect()
        };
        self.index.keys().eq(other.index.keys()) && names(self) == names(other)
    }
}

impl Eq for UndiGraph {}

impl UndiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = VarId>) -> Self {
        let mut g = UndiGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = UndiGraph::new();
        for (a, b) in edges {
            g.connect(VarId::new(a), VarId::new(b));
        }
        g
    }

    pub fn add_vertex(&mut self, v: VarId) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(v.clone(), i);
        self.vertices.push(v);
        i
    }

    pub fn connect(&mut self, a: VarId, b: VarId) -> bool {
        let (i, j) = (self.add_vertex(a), self.add_vertex(b));
        self.edges.insert((i.min(j), i.max(j)))
    }

    pub fn vertices(&self) -> &[VarId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&VarId, &VarId)> + '_ {
        self.edges.iter().map(|&(a, b)| (&self.vertices[a], &self.vertices[b]))
    }

    pub fn has_edge(&self, a: &VarId, b: &VarId) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.edges.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    /// Largest number of edges at a vertex (a self-pair counts once).
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            if a != b {
                deg[b] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Union-find cycle detection; a self-pair is a cycle.
    pub fn has_undirected_cycle(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra == rb {
                return true;
            }
            parent[ra] = rb;
        }
        false
    }

    /// All orientations. Each non-self edge `{a, b}` (a before b in vertex
    /// order) is a bit of a counter; bit clear means `a -> b`. The first edge
    /// is the most significant bit. Self-pairs stay loops.
    pub fn orientations(&self) -> Result<Orientations<'_>, GraphError> {
        let proper: Vec<(usize, usize)> = self.edges.iter().copied().filter(|(a, b)| a != b).collect();
        if proper.len() > MAX_ORIENTATION_EDGES {
            return Err(GraphError::EdgeBudget {
                edges: proper.len(),
                max: MAX_ORIENTATION_EDGES,
            });
        }
        Ok(Orientations {
            graph: self,
            proper,
            next: 0,
        })
    }
}

pub struct Orientations<'g> {
    graph: &'g UndiGraph,
    proper: Vec<(usize, usize)>,
    next: u64,
}

impl Iterator for Orientations<'_> {
    type Item = DiGraph;

    fn next(&mut self) -> Option<DiGraph> {
        let m = self.proper.len();
        if self.next >= 1u64 << m {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let g = self.graph;
        let mut d = DiGraph::with_vertices(g.vertices.iter().cloned());
        for &(a, b) in g.edges.iter().filter(|(a, b)| a == b) {
            d.insert_edge(a, b);
        }
        for (k, &(a, b)) in self.proper.iter().enumerate() {
            if mask >> (m - 1 - k) & 1 == 0 {
                d.insert_edge(a, b);
            } else {
                d.insert_edge(b, a);
            }
        }
        Some(d)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = ((1u64 << self.proper.len()) - self.next) as usize;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(names: &[&str]) -> Vec<VarId> {
        names.iter().map(VarId::new).collect()
    }

    fn yablo_graph(n: usize) -> DiGraph {
        let mut g = DiGraph::with_vertices((1..=n).map(|i| VarId::new(alloc::format!("Y{i}"))));
        for i in 1..=n {
            for j in i + 1..=n {
                g.connect(VarId::new(alloc::format!("Y{i}")), VarId::new(alloc::format!("Y{j}")));
            }
        }
        g
    }

    fn chain() -> DiGraph {
        DiGraph::from_edges([("a", "b"), ("b", "c")])
    }

    #[test]
    fn underlying_merges_anti_parallel() {
        let u = DiGraph::from_edges([("a", "b"), ("b", "a")]).underlying();
        assert_eq!(u.edge_count(), 1);
        assert_eq!(DiGraph::new().underlying(), UndiGraph::new());
        assert_eq!(
            yablo_graph(3).underlying(),
            UndiGraph::from_edges([("Y1", "Y2"), ("Y2", "Y3"), ("Y1", "Y3")])
        );
    }

    #[test]
    fn successors() {
        let g = yablo_graph(4);
        assert_eq!(g.succ(&"Y2".into()).unwrap(), ids(&["Y3", "Y4"]));
        assert!(g.succ(&"Y4".into()).unwrap().is_empty());
        let l = DiGraph::from_edges([("x", "x")]);
        assert_eq!(l.succ(&"x".into()).unwrap(), ids(&["x"]));
        assert_eq!(g.succ(&"nope".into()), Err(GraphError::UnknownVertex("nope".into())));
    }

    #[test]
    fn downward_and_cone() {
        let g = chain();
        assert_eq!(g.downward(&"a".into()).unwrap(), ids(&["b", "c"]));
        assert_eq!(g.cone(&"a".into()).unwrap(), g);
        let y = yablo_graph(4);
        let cone = y.cone(&"Y2".into()).unwrap();
        assert_eq!(cone, DiGraph::from_edges([("Y2", "Y3"), ("Y2", "Y4"), ("Y3", "Y4")]));
    }

    #[test]
    fn transitivity() {
        assert!(yablo_graph(5).is_transitive());
        let g = chain();
        assert!(!g.is_transitive());
        let c = g.transitive_closure();
        assert!(c.has_edge(&"a".into(), &"c".into()));
        assert_eq!(c.edge_count(), 3);
        assert!(DiGraph::with_vertices(ids(&["a", "b"])).is_transitive());
    }

    #[test]
    fn cycles() {
        assert!(!DiGraph::from_edges([("x", "x")]).is_cycle_free());
        assert!(!DiGraph::from_edges([("a", "b"), ("b", "a")]).is_cycle_free());
        assert!(yablo_graph(6).is_cycle_free());
        assert_eq!(chain().topological_order().unwrap(), ids(&["a", "b", "c"]));
    }

    #[test]
    fn simple_connectedness() {
        assert!(chain().is_simply_connected());
        let diamond = DiGraph::from_edges([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]);
        assert!(!diamond.is_simply_connected());
        assert!(!DiGraph::from_edges([("a", "b"), ("b", "a")]).is_simply_connected());
        assert!(!DiGraph::from_edges([("a", "a")]).is_simply_connected());
        assert!(DiGraph::from_edges([("a", "b"), ("c", "b"), ("c", "d")]).is_simply_connected());
    }

    #[test]
    fn components_split() {
        let g = DiGraph::from_edges([("a", "b"), ("c", "d")]);
        assert_eq!(g.components().len(), 2);
        assert_eq!(chain().components(), vec![chain()]);
        let mut g = chain();
        g.remove_edge(&"a".into(), &"b".into());
        let parts = g.components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], DiGraph::with_vertices(ids(&["a"])));
        assert_eq!(parts[1], DiGraph::from_edges([("b", "c")]));
    }

    #[test]
    fn homomorphisms_and_collapse() {
        let g = chain();
        let id: VertexMap = g.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
        assert!(g.is_homomorphism(&g, &id).unwrap());
        assert_eq!(g.collapse(&id).unwrap(), g);

        let point = DiGraph::with_vertices(ids(&["p"]));
        let constant: VertexMap = g.vertices().iter().map(|v| (v.clone(), "p".into())).collect();
        assert!(!g.is_homomorphism(&point, &constant).unwrap());
        assert_eq!(
            g.homomorphism_violation(&point, &constant).unwrap(),
            Some(("a".into(), "b".into()))
        );
        assert!(matches!(g.collapse(&constant), Err(GraphError::CollapseLoop { .. })));

        let mut partial = id.clone();
        partial.remove(&VarId::new("c"));
        assert_eq!(g.is_homomorphism(&g, &partial), Err(GraphError::PartialMap("c".into())));
    }

    #[test]
    fn orientation_counts() {
        let e = UndiGraph::from_edges([("a", "b")]);
        assert_eq!(e.orientations().unwrap().count(), 2);
        let tri = UndiGraph::from_edges([("a", "b"), ("b", "c"), ("a", "c")]);
        let all: Vec<DiGraph> = tri.orientations().unwrap().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|d| !d.is_cycle_free()).count(), 2);
        assert!(tri.has_undirected_cycle());
        assert!(!UndiGraph::from_edges([("a", "b"), ("a", "c"), ("c", "d")]).has_undirected_cycle());

        let names: Vec<alloc::string::String> = (0..18).map(|i| alloc::format!("v{i}")).collect();
        let mut wide = UndiGraph::new();
        for i in 0..17 {
            wide.connect(VarId::new(&names[i]), VarId::new(&names[i + 1]));
        }
        assert!(matches!(
            wide.orientations(),
            Err(GraphError::EdgeBudget { edges: 17, max: 16 })
        ));
    }

    fn arb_digraph() -> impl Strategy<Value = DiGraph> {
        proptest::collection::vec((0usize..6, 0usize..6), 0..14).prop_map(|pairs| {
            let mut g = DiGraph::with_vertices((0..6).map(|i| VarId::new(alloc::format!("v{i}"))));
            for (a, b) in pairs {
                g.insert_edge(a, b);
            }
            g
        })
    }

    fn arb_undigraph() -> impl Strategy<Value = UndiGraph> {
        proptest::collection::vec((0usize..5, 0usize..5), 0..9).prop_map(|pairs| {
            let mut u = UndiGraph::with_vertices((0..5).map(|i| VarId::new(alloc::format!("v{i}"))));
            for (a, b) in pairs.into_iter().filter(|(a, b)| a != b) {
                u.connect(VarId::new(alloc::format!("v{a}")), VarId::new(alloc::format!("v{b}")));
            }
            u
        })
    }

    proptest! {
        #[test]
        fn closure_is_idempotent_and_transitive(g in arb_digraph()) {
            let c = g.transitive_closure();
            prop_assert!(c.is_transitive());
            prop_assert_eq!(c.transitive_closure(), c.clone());
            prop_assert!(g.edges().all(|(a, b)| c.has_edge(a, b)));
        }

        #[test]
        fn components_partition(g in arb_digraph()) {
            let parts = g.components();
            let total: usize = parts.iter().map(DiGraph::vertex_count).sum();
            prop_assert_eq!(total, g.vertex_count());
            let edges: usize = parts.iter().map(DiGraph::edge_count).sum();
            prop_assert_eq!(edges, g.edge_count());
            let mut seen = BTreeSet::new();
            for p in &parts {
                for v in p.vertices() {
                    prop_assert!(seen.insert(v.clone()));
                }
            }
        }

        #[test]
        fn orientation_count_is_power_of_two(u in arb_undigraph()) {
            let os: Vec<DiGraph> = u.orientations().unwrap().collect();
            prop_assert_eq!(os.len(), 1usize << u.edge_count());
            for d in &os {
                prop_assert_eq!(d.underlying(), u.clone());
                prop_assert!(!d.has_loop());
            }
        }

        #[test]
        fn collapse_of_homomorphism_is_subgraph(g in arb_digraph(), images in proptest::collection::vec(0usize..4, 6)) {
            let h = DiGraph::from_edges([("h0", "h1"), ("h1", "h2"), ("h2", "h3"), ("h3", "h0"), ("h0", "h2")]);
            let f: VertexMap = g.vertices().iter().zip(&images)
                .map(|(v, &i)| (v.clone(), VarId::new(alloc::format!("h{i}")))).collect();
            if g.is_homomorphism(&h, &f).unwrap() {
                let c = g.collapse(&f).unwrap();
                prop_assert!(c.vertices().iter().all(|v| h.contains_vertex(v)));
                prop_assert!(c.edges().all(|(a, b)| h.has_edge(a, b)));
            }
        }

        #[test]
        fn simple_connectivity_survives_edge_deletion(g in arb_digraph(), k in 0usize..20) {
            if g.is_simply_connected() && g.is_cycle_free() && g.edge_count() > 0 {
                let (a, b) = g.edges().nth(k % g.edge_count()).map(|(a, b)| (a.clone(), b.clone())).unwrap();
                let mut h = g.clone();
                h.remove_edge(&a, &b);
                prop_assert!(h.is_simply_connected());
            }
        }
    }
}
