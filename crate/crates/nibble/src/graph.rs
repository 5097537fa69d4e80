//! Undirected multigraph with per-vertex self-loop counts and
//! degree-preserving induced subgraph views.
//!
//! Simple edges are unweighted and deduplicated; only self-loops carry
//! multiplicity. Volumes always measure degrees in the base graph, so a
//! view's degrees match the base graph's.

use num_rational::Ratio;

use crate::error::GraphError;

pub type Vertex = u32;

/// Exact rational used for conductance and balance values.
pub type Frac = Ratio<u64>;

#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    self_loops: Vec<u64>,
    degree: Vec<u64>,
    total_volume: u64,
}

impl Graph {
    /// Builds a graph from symmetric simple edges and explicit self-loop
    /// counts. Rejects duplicate edges, `u == v` edges, and degree-0
    /// vertices. The vertex count is one past the largest id mentioned.
    pub fn build(edges: &[(Vertex, Vertex)], self_loops: &[(Vertex, u64)]) -> Result<Graph, GraphError> {
        let mut n = 0usize;
        for &(u, v) in edges {
            n = n.max(u as usize + 1).max(v as usize + 1);
        }
        for &(u, k) in self_loops {
            if k > 0 {
                n = n.max(u as usize + 1);
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfEdge(u));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        for (u, list) in adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] == w[1] {
                    let (a, b) = (u as Vertex, w[0]);
                    return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
                }
            }
        }
        let mut loops = vec![0u64; n];
        for &(u, k) in self_loops {
            if (u as usize) >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, count: n });
            }
            loops[u as usize] += k;
        }
        let mut degree = vec![0u64; n];
        let mut total = 0u64;
        for u in 0..n {
            degree[u] = adjacency[u].len() as u64 + loops[u];
            if degree[u] == 0 {
                return Err(GraphError::IsolatedVertex(u as Vertex));
            }
            total += degree[u];
        }
        Ok(Graph { adjacency, self_loops: loops, degree, total_volume: total })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.adjacency[u as usize]
    }

    pub fn self_loops(&self, u: Vertex) -> u64 {
        self.self_loops[u as usize]
    }

    pub fn degree(&self, u: Vertex) -> u64 {
        self.degree[u as usize]
    }

    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count() as Vertex).into_iter()
    }
}

/// Sorted vertex set with its base-graph volume cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<Vertex>,
    volume: u64,
}

impl VertexSet {
    pub fn new(g: &Graph, members: Vec<Vertex>) -> Result<VertexSet, GraphError> {
        for w in members.windows(2) {
            if w[0] >= w[1] {
                return Err(GraphError::UnsortedMembers(w[1], w[0]));
            }
        }
        let mut volume = 0u64;
        for &u in &members {
            if (u as usize) >= g.vertex_count() {
                return Err(GraphError::VertexOutOfRange { vertex: u, count: g.vertex_count() });
            }
            volume += g.degree(u);
        }
        Ok(VertexSet { members, volume })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(g: &Graph, mut members: Vec<Vertex>) -> Result<VertexSet, GraphError> {
        members.sort_unstable();
        members.dedup();
        VertexSet::new(g, members)
    }

    pub fn all(g: &Graph) -> VertexSet {
        VertexSet { members: g.vertices().collect(), volume: g.total_volume() }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: Vertex) -> bool {
        self.members.binary_search(&u).is_ok()
    }
}

/// Common read surface for a whole graph and an induced-subgraph view.
///
/// Degrees always come from the base graph; a view turns boundary edges
/// into self-loops so every active vertex keeps its base degree.
pub trait GraphRef {
    fn base(&self) -> &Graph;
    fn is_active(&self, u: Vertex) -> bool;
    fn active_volume(&self) -> u64;
    fn active_count(&self) -> usize;
    fn active_vertices(&self) -> Box<dyn Iterator<Item = Vertex> + '_>;

    fn degree(&self, u: Vertex) -> u64 {
        self.base().degree(u)
    }

    fn neighbors(&self, u: Vertex) -> &[Vertex] {
        self.base().neighbors(u)
    }

    /// Self-loop count as seen by a walk on this view: base loops plus
    /// one per boundary edge to an inactive vertex.
    fn view_self_loops(&self, u: Vertex) -> u64 {
        let mut loops = self.base().self_loops(u);
        for &w in self.base().neighbors(u) {
            if !self.is_active(w) {
                loops += 1;
            }
        }
        loops
    }
}

impl GraphRef for Graph {
    fn base(&self) -> &Graph {
        self
    }

    fn is_active(&self, u: Vertex) -> bool {
        (u as usize) < self.vertex_count()
    }

    fn active_volume(&self) -> u64 {
        self.total_volume
    }

    fn active_count(&self) -> usize {
        self.vertex_count()
    }

    fn active_vertices(&self) -> Box<dyn Iterator<Item = Vertex> + '_> {
        Box::new(self.vertices())
    }

    fn view_self_loops(&self, u: Vertex) -> u64 {
        self.self_loops(u)
    }
}

/// Non-materializing view of `G[A]`: the base graph restricted to an
/// active set, with boundary edges re-counted as self-loops.
#[derive(Debug, Clone)]
pub struct SubgraphView<'g> {
    base: &'g Graph,
    active: VertexSet,
    mask: Vec<bool>,
}

impl<'g> SubgraphView<'g> {
    pub fn active_set(&self) -> &VertexSet {
        &self.active
    }
}

impl GraphRef for SubgraphView<'_> {
    fn base(&self) -> &Graph {
        self.base
    }

    fn is_active(&self, u: Vertex) -> bool {
        self.mask.get(u as usize).copied().unwrap_or(false)
    }

    fn active_volume(&self) -> u64 {
        self.active.volume()
    }

    fn active_count(&self) -> usize {
        self.active.len()
    }

    fn active_vertices(&self) -> Box<dyn Iterator<Item = Vertex> + '_> {
        Box::new(self.active.members().iter().copied())
    }
}

pub fn induce_subgraph<'g>(g: &'g Graph, active: VertexSet) -> Result<SubgraphView<'g>, GraphError> {
    if active.is_empty() {
        return Err(GraphError::EmptyActiveSet);
    }
    let mut mask = vec![false; g.vertex_count()];
    for &u in active.members() {
        mask[u as usize] = true;
    }
    Ok(SubgraphView { base: g, active, mask })
}

fn check_membership(g: &impl GraphRef, s: &VertexSet) -> Result<(), GraphError> {
    for &u in s.members() {
        if !g.is_active(u) {
            return Err(GraphError::VertexOutOfRange { vertex: u, count: g.base().vertex_count() });
        }
    }
    Ok(())
}

/// Sum of base-graph degrees over `s`.
pub fn volume(g: &impl GraphRef, s: &VertexSet) -> Result<u64, GraphError> {
    check_membership(g, s)?;
    Ok(s.volume())
}

/// Number of simple edges with exactly one endpoint in `s`. For a view,
/// only edges between two active vertices can cross the cut.
pub fn boundary_size(g: &impl GraphRef, s: &VertexSet) -> Result<u64, GraphError> {
    check_membership(g, s)?;
    let mut count = 0u64;
    for &u in s.members() {
        for &w in g.neighbors(u) {
            if g.is_active(w) && !s.contains(w) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Conductance of `s` within the active set, as an exact rational.
/// Returns 1 for the empty set, the full active set, or a zero
/// denominator.
pub fn conductance(g: &impl GraphRef, s: &VertexSet) -> Result<Frac, GraphError> {
    check_membership(g, s)?;
    let vol_s = s.volume();
    let vol_rest = g.active_volume() - vol_s;
    let denom = vol_s.min(vol_rest);
    if s.is_empty() || s.len() == g.active_count() || denom == 0 {
        return Ok(Frac::from_integer(1));
    }
    Ok(Frac::new(boundary_size(g, s)?, denom))
}

/// min(vol S, vol V-S) / vol V.
pub fn balance(g: &impl GraphRef, s: &VertexSet) -> Result<Frac, GraphError> {
    check_membership(g, s)?;
    let vol_s = s.volume();
    let vol_rest = g.active_volume() - vol_s;
    Ok(Frac::new(vol_s.min(vol_rest), g.active_volume()))
}
