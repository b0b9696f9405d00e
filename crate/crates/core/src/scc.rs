//! Strongly connected components and their condensation.

use std::collections::BTreeSet;

use crate::graph::{Digraph, Vertex, VertexSet};

/// Condensation of a digraph.
///
/// Components are sorted internally and ordered by their smallest vertex.
/// `in_degree[c]` / `out_degree[c]` count the digraph edges entering / leaving
/// component `c` (the size of its incut / outcut).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDag {
    pub components: Vec<Vec<Vertex>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    component_of: Vec<usize>,
}

impl SccDag {
    pub fn component_of(&self, v: Vertex) -> usize {
        self.component_of[v.index()]
    }

    /// Components no edge enters from outside.
    pub fn source_components(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.components.len()).filter(|&c| self.in_degree[c] == 0)
    }

    pub fn component_set(&self, c: usize) -> VertexSet {
        self.components[c].iter().copied().collect()
    }
}

/// Tarjan's algorithm, iterative, linear in `|V| + |E|`.
pub fn scc_dag(g: &Digraph) -> SccDag {
    const UNVISITED: usize = usize::MAX;
    let bound = g.id_bound();
    let mut index = vec![UNVISITED; bound];
    let mut low = vec![0usize; bound];
    let mut on_stack = vec![false; bound];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut raw: Vec<Vec<Vertex>> = Vec::new();
    let mut counter = 0usize;

    for &root in g.vertices() {
        if index[root.index()] != UNVISITED {
            continue;
        }
        // (vertex, position in its out-list)
        let mut call: Vec<(Vertex, usize)> = vec![(root, 0)];
        index[root.index()] = counter;
        low[root.index()] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root.index()] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.out_neighbours(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w.index()] == UNVISITED {
                    index[w.index()] = counter;
                    low[w.index()] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w.index()] = true;
                    call.push((w, 0));
                } else if on_stack[w.index()] {
                    low[v.index()] = low[v.index()].min(index[w.index()]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent.index()] = low[parent.index()].min(low[v.index()]);
            }
            if low[v.index()] == index[v.index()] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w.index()] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                raw.push(comp);
            }
        }
    }

    raw.sort_by_key(|c| c[0]);
    let mut component_of = vec![usize::MAX; bound];
    for (i, comp) in raw.iter().enumerate() {
        for v in comp {
            component_of[v.index()] = i;
        }
    }
    let mut dag_edges = BTreeSet::new();
    let mut in_degree = vec![0; raw.len()];
    let mut out_degree = vec![0; raw.len()];
    for e in g.edges() {
        let (a, b) = (
            component_of[e.source.index()],
            component_of[e.target.index()],
        );
        if a != b {
            dag_edges.insert((a, b));
            out_degree[a] += 1;
            in_degree[b] += 1;
        }
    }
    SccDag {
        components: raw,
        dag_edges,
        in_degree,
        out_degree,
        component_of,
    }
}
