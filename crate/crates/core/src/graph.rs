//! State digraphs and root sets.
//!
//! An edge `u -> v` means state `u` influences the derivative of state `v`,
//! i.e. the entry `a[v][u]` of the state matrix is nonzero. Every other module
//! relies on this orientation.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A state vertex, identified by its 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn id(self) -> u32 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A directed state edge `source -> target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: Vertex,
    pub target: Vertex,
}

impl Edge {
    pub fn new(source: u32, target: u32) -> Self {
        Edge {
            source: Vertex(source),
            target: Vertex(target),
        }
    }

    pub fn reversed(self) -> Self {
        Edge {
            source: self.target,
            target: self.source,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.source, self.target)
    }
}

pub type VertexSet = BTreeSet<Vertex>;

/// Builds a vertex set from raw 1-based ids.
pub fn vertex_set<I: IntoIterator<Item = u32>>(ids: I) -> VertexSet {
    ids.into_iter().map(Vertex).collect()
}

/// Immutable sparsity pattern of a state matrix.
///
/// Vertex ids need not be contiguous, so subgraphs keep the ids of the graph
/// they were cut from. Adjacency lists are kept sorted, which makes every
/// traversal in the crate visit vertices in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    present: Vec<bool>,
    vertices: Vec<Vertex>,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Digraph {
    /// Vertices `1..=vertex_count` with the given edges. With `undirected`
    /// set, every pair contributes both orientations. Duplicates collapse.
    pub fn build<I>(vertex_count: u32, pairs: I, undirected: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if vertex_count == 0 {
            return Err(Error::ZeroVertices);
        }
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for id in [u, v] {
                if id == 0 || id > vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: id,
                        bound: vertex_count,
                    });
                }
            }
            edges.push(Edge::new(u, v));
            if undirected {
                edges.push(Edge::new(v, u));
            }
        }
        Self::from_parts((1..=vertex_count).map(Vertex), edges)
    }

    /// Arbitrary vertex ids (nonzero) and edges between them.
    pub fn from_parts<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = Edge>,
    {
        let vertices: VertexSet = vertices.into_iter().collect();
        if let Some(zero) = vertices.iter().find(|v| v.0 == 0) {
            return Err(Error::UnknownVertex(*zero));
        }
        let bound = vertices.iter().next_back().map_or(1, |v| v.index() + 1);
        let mut present = vec![false; bound];
        for v in &vertices {
            present[v.index()] = true;
        }
        let mut out_adj = vec![Vec::new(); bound];
        let mut in_adj = vec![Vec::new(); bound];
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        for e in &edges {
            for v in [e.source, e.target] {
                if !present.get(v.index()).copied().unwrap_or(false) {
                    return Err(Error::UnknownVertex(v));
                }
            }
            out_adj[e.source.index()].push(e.target);
            in_adj[e.target.index()].push(e.source);
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Digraph {
            present,
            vertices: vertices.into_iter().collect(),
            out_adj,
            in_adj,
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.present.get(v.index()).copied().unwrap_or(false)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.contains(e.source)
            && self.out_adj[e.source.index()]
                .binary_search(&e.target)
                .is_ok()
    }

    /// Edges in ascending `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.iter().flat_map(move |&u| {
            self.out_adj[u.index()].iter().map(move |&v| Edge {
                source: u,
                target: v,
            })
        })
    }

    pub fn out_neighbours(&self, v: Vertex) -> &[Vertex] {
        self.out_adj.get(v.index()).map_or(&[], Vec::as_slice)
    }

    pub fn in_neighbours(&self, v: Vertex) -> &[Vertex] {
        self.in_adj.get(v.index()).map_or(&[], Vec::as_slice)
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_neighbours(v).len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_neighbours(v).len()
    }

    /// Maximum out-degree over all vertices.
    pub fn max_out_degree(&self) -> usize {
        self.vertices
            .iter()
            .map(|&v| self.out_degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        self.vertices
            .iter()
            .map(|&v| self.in_degree(v))
            .max()
            .unwrap_or(0)
    }

    /// One more than the largest vertex id; sizes id-indexed scratch arrays.
    pub(crate) fn id_bound(&self) -> usize {
        self.present.len()
    }

    pub fn without_edge(&self, e: Edge) -> Result<Self> {
        if !self.has_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        let mut g = self.clone();
        g.out_adj[e.source.index()].retain(|&t| t != e.target);
        g.in_adj[e.target.index()].retain(|&s| s != e.source);
        g.edge_count -= 1;
        Ok(g)
    }

    pub fn without_edges(&self, removed: &[Edge]) -> Result<Self> {
        let mut g = self.clone();
        for &e in removed {
            g = g.without_edge(e)?;
        }
        Ok(g)
    }

    /// Adds edges between existing vertices; already-present edges are ignored.
    pub fn with_edges<I: IntoIterator<Item = Edge>>(&self, extra: I) -> Result<Self> {
        Self::from_parts(self.vertices.iter().copied(), self.edges().chain(extra))
    }

    /// Adds a new vertex together with edges touching it.
    pub fn with_vertex<I: IntoIterator<Item = Edge>>(&self, z: Vertex, edges: I) -> Result<Self> {
        if self.contains(z) {
            return Err(Error::VertexAlreadyPresent(z));
        }
        Self::from_parts(
            self.vertices.iter().copied().chain(std::iter::once(z)),
            self.edges().chain(edges),
        )
    }

    /// The subgraph induced by `keep`.
    pub fn induced(&self, keep: &VertexSet) -> Result<Self> {
        for &v in keep {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        Self::from_parts(
            keep.iter().copied(),
            self.edges()
                .filter(|e| keep.contains(&e.source) && keep.contains(&e.target)),
        )
    }

    /// Every vertex lying on a directed path that starts in `sources`,
    /// the sources included.
    pub fn reachable_from<'a, I>(&self, sources: I) -> VertexSet
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let mut seen = vec![false; self.id_bound()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if self.contains(s) && !seen[s.index()] {
                seen[s.index()] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in self.out_neighbours(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        self.vertices
            .iter()
            .copied()
            .filter(|v| seen[v.index()])
            .collect()
    }
}

/// State vertices that receive a dedicated input (`B = diag(delta)`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSet {
    members: VertexSet,
}

impl RootSet {
    pub fn new<I: IntoIterator<Item = Vertex>>(members: I) -> Self {
        RootSet {
            members: members.into_iter().collect(),
        }
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        Self::new(ids.into_iter().map(Vertex))
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.members.iter().map(|v| v.0).collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet {
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn with(&self, v: Vertex) -> RootSet {
        let mut members = self.members.clone();
        members.insert(v);
        RootSet { members }
    }

    /// The roots that are vertices of `g`.
    pub fn restricted_to(&self, g: &Digraph) -> RootSet {
        RootSet::new(self.iter().filter(|&v| g.contains(v)))
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        match self.iter().find(|&v| !g.contains(v)) {
            Some(v) => Err(Error::RootNotInGraph(v)),
            None => Ok(()),
        }
    }

    /// Indicator vector over `g`'s vertices in ascending order.
    pub fn indicator(&self, g: &Digraph) -> Vec<bool> {
        g.vertices().iter().map(|&v| self.contains(v)).collect()
    }

    /// Edges of `g` terminating at a root.
    pub fn is_root_edge(&self, e: Edge) -> bool {
        self.contains(e.target)
    }
}

impl FromIterator<Vertex> for RootSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        RootSet::new(iter)
    }
}
