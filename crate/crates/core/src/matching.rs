//! Bipartite representation of a digraph and maximum matchings on it.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, Vertex, VertexSet};

/// `H(A)`: a left copy and a right copy of every state vertex, with one
/// undirected edge `(u_left, w_right)` per digraph edge `u -> w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl BipartiteGraph {
    pub fn of(g: &Digraph) -> Self {
        BipartiteGraph {
            vertices: g.vertices().to_vec(),
            edges: g.edges().map(|e| (e.source, e.target)).collect(),
        }
    }

    pub fn left(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn right(&self) -> &[Vertex] {
        &self.vertices
    }

    /// `(left, right)` pairs in ascending order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    fn dense(&self) -> (DenseBipartite, Vec<Vertex>) {
        let position = |v: Vertex| {
            self.vertices
                .binary_search(&v)
                .expect("endpoint is a vertex")
        };
        let mut rows = vec![Vec::new(); self.vertices.len()];
        for &(l, r) in &self.edges {
            rows[position(l)].push(position(r));
        }
        (
            DenseBipartite {
                rows,
                n_cols: self.vertices.len(),
            },
            self.vertices.clone(),
        )
    }
}

/// A matching of `H(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// `(left, right)` pairs, ascending by left vertex.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub unmatched_left: VertexSet,
    pub unmatched_right: VertexSet,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// Hopcroft-Karp on `H(A)`. Only the cardinality is canonical; for a fixed
/// input the pair set is reproducible because vertices are scanned in id order.
pub fn maximum_matching(h: &BipartiteGraph) -> Matching {
    let (dense, ids) = h.dense();
    let m = hopcroft_karp(&dense, None, DenseMatching::empty(&dense));
    let mut pairs = Vec::new();
    let mut unmatched_left = VertexSet::new();
    for (row, col) in m.row_to_col.iter().enumerate() {
        match col {
            Some(c) => pairs.push((ids[row], ids[*c])),
            None => {
                unmatched_left.insert(ids[row]);
            }
        }
    }
    let unmatched_right = m
        .col_to_row
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none())
        .map(|(c, _)| ids[c])
        .collect();
    Matching {
        pairs,
        unmatched_left,
        unmatched_right,
    }
}

/// Dense bipartite graph: `rows[r]` lists the columns adjacent to row `r`.
#[derive(Debug, Clone)]
pub(crate) struct DenseBipartite {
    pub rows: Vec<Vec<usize>>,
    pub n_cols: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct DenseMatching {
    pub row_to_col: Vec<Option<usize>>,
    pub col_to_row: Vec<Option<usize>>,
    pub size: usize,
}

impl DenseMatching {
    pub fn empty(g: &DenseBipartite) -> Self {
        DenseMatching {
            row_to_col: vec![None; g.rows.len()],
            col_to_row: vec![None; g.n_cols],
            size: 0,
        }
    }

    pub fn unmatched_rows<'a>(
        &'a self,
        active: Option<&'a [bool]>,
    ) -> impl Iterator<Item = usize> + 'a {
        self.row_to_col
            .iter()
            .enumerate()
            .filter(move |(r, c)| c.is_none() && active.is_none_or(|a| a[*r]))
            .map(|(r, _)| r)
    }
}

const INF: usize = usize::MAX;

/// Grows `start` to a maximum matching. Rows with `active[r] == false` are
/// ignored (never matched); `start` must not match inactive rows.
pub(crate) fn hopcroft_karp(
    g: &DenseBipartite,
    active: Option<&[bool]>,
    start: DenseMatching,
) -> DenseMatching {
    let n_rows = g.rows.len();
    let is_active = |r: usize| active.is_none_or(|a| a[r]);
    let mut m = start;
    let mut dist = vec![INF; n_rows];
    loop {
        // Layer free rows, then alternate through matched columns.
        let mut queue = VecDeque::new();
        for (r, dr) in dist.iter_mut().enumerate() {
            if is_active(r) && m.row_to_col[r].is_none() {
                *dr = 0;
                queue.push_back(r);
            } else {
                *dr = INF;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &c in &g.rows[r] {
                match m.col_to_row[c] {
                    None => found = true,
                    Some(next) if dist[next] == INF => {
                        dist[next] = dist[r] + 1;
                        queue.push_back(next);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }
        let mut next_edge = vec![0usize; n_rows];
        for r in 0..n_rows {
            if is_active(r)
                && m.row_to_col[r].is_none()
                && augment(g, r, &mut m, &mut dist, &mut next_edge)
            {
                m.size += 1;
            }
        }
    }
}

fn augment(
    g: &DenseBipartite,
    r: usize,
    m: &mut DenseMatching,
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[r] < g.rows[r].len() {
        let c = g.rows[r][next_edge[r]];
        next_edge[r] += 1;
        let ok = match m.col_to_row[c] {
            None => true,
            Some(next) => {
                dist[next] == dist[r].wrapping_add(1) && augment(g, next, m, dist, next_edge)
            }
        };
        if ok {
            m.row_to_col[r] = Some(c);
            m.col_to_row[c] = Some(r);
            return true;
        }
    }
    dist[r] = INF;
    false
}

/// Rows reachable from the unmatched row `start` by alternating paths.
/// When `m` is maximum these rows have exactly `|rows| - 1` neighbours.
pub(crate) fn alternating_rows(g: &DenseBipartite, m: &DenseMatching, start: usize) -> Vec<usize> {
    let mut seen_row = vec![false; g.rows.len()];
    let mut seen_col = vec![false; g.n_cols];
    let mut queue = VecDeque::from([start]);
    seen_row[start] = true;
    while let Some(r) = queue.pop_front() {
        for &c in &g.rows[r] {
            if seen_col[c] {
                continue;
            }
            seen_col[c] = true;
            if let Some(next) = m.col_to_row[c] {
                if !seen_row[next] {
                    seen_row[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    (0..g.rows.len()).filter(|&r| seen_row[r]).collect()
}

pub(crate) fn neighbourhood_size(g: &DenseBipartite, rows: &[usize]) -> usize {
    let mut seen = vec![false; g.n_cols];
    let mut count = 0;
    for &r in rows {
        for &c in &g.rows[r] {
            if !seen[c] {
                seen[c] = true;
                count += 1;
            }
        }
    }
    count
}

/// Shrinks a Hall violator (fewer neighbours than rows) until every proper
/// subset has a saturating matching, i.e. until it is inclusion-minimal.
pub(crate) fn minimal_violator(g: &DenseBipartite, violator: Vec<usize>) -> Vec<usize> {
    debug_assert!(neighbourhood_size(g, &violator) < violator.len());
    let mut set = violator;
    'shrink: loop {
        for &dropped in &set {
            let mut active = vec![false; g.rows.len()];
            for &r in &set {
                active[r] = r != dropped;
            }
            let m = hopcroft_karp(g, Some(&active), DenseMatching::empty(g));
            if m.size < set.len() - 1 {
                let start = m
                    .unmatched_rows(Some(&active))
                    .next()
                    .expect("deficient matching");
                set = alternating_rows(g, &m, start);
                continue 'shrink;
            }
        }
        return set;
    }
}
