//! Single-edge failures: critical edges, failure witnesses, critical sets,
//! the edge-controllability index and an exhaustive verifier.
//!
//! Only state edges can fail. Input edges are never removed, and an edge
//! ending at a root (a "root edge") is excluded from the index and from the
//! default verifier scope.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::controllability::{
    in_neighbourhood, is_controllable, is_structurally_controllable, HallGraph,
};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge, RootSet, Vertex, VertexSet};
use crate::matching::hopcroft_karp;
use crate::scc::scc_dag;

/// Largest `k` accepted by the brute-force index routines.
pub const MAX_BRUTE_FORCE_K: usize = 3;

/// Largest set size [`critical_sets`] will enumerate.
pub const MAX_CRITICAL_SET_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// The failure leaves a root-free source SCC (inaccessibility).
    SourceScc,
    /// The failure leaves a dilation while everything stays accessible.
    DilationSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEdgeReport {
    pub edge: Edge,
    /// `SourceScc` whenever `witness_x` is present.
    pub witness_kind: WitnessKind,
    /// Root-free SCC with no incoming edge in `g - edge`.
    pub witness_x: Option<VertexSet>,
    /// Minimal root-free set with fewer in-neighbours than members in `g - edge`.
    pub witness_s: Option<VertexSet>,
}

/// Which edges a failure may hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeScope {
    #[default]
    NonRoot,
    All,
}

impl EdgeScope {
    pub fn admits(self, roots: &RootSet, e: Edge) -> bool {
        match self {
            EdgeScope::All => true,
            EdgeScope::NonRoot => !roots.is_root_edge(e),
        }
    }
}

/// Witnesses for the failure of `e`. Errors with [`Error::NotCritical`] when
/// `g - e` is still controllable.
pub fn failure_witness(g: &Digraph, roots: &RootSet, e: Edge) -> Result<CriticalEdgeReport> {
    let damaged = g.without_edge(e)?;
    let verdict = is_structurally_controllable(&damaged, roots)?;
    if verdict.controllable {
        return Err(Error::NotCritical(e));
    }
    let witness_x = if verdict.inaccessible_vertices.is_empty() {
        None
    } else {
        let dag = scc_dag(&damaged);
        let orphans: Vec<usize> = dag
            .source_components()
            .filter(|&c| dag.components[c].iter().all(|v| !roots.contains(*v)))
            .collect();
        let pick = orphans
            .iter()
            .copied()
            .find(|&c| dag.component_of(e.target) == c)
            .or_else(|| orphans.first().copied());
        pick.map(|c| dag.component_set(c))
    };
    Ok(CriticalEdgeReport {
        edge: e,
        witness_kind: if witness_x.is_some() {
            WitnessKind::SourceScc
        } else {
            WitnessKind::DilationSet
        },
        witness_x,
        witness_s: verdict.dilation_witness,
    })
}

/// All edges whose removal breaks structural controllability, ascending.
///
/// One maximum matching of the controllable pair is computed up front. An
/// edge outside it cannot create a dilation; an edge inside it only needs a
/// single augmenting-path repair. Accessibility is a BFS around the edge.
pub fn critical_edge_scan(g: &Digraph, roots: &RootSet) -> Result<Vec<CriticalEdgeReport>> {
    if !is_controllable(g, roots)? {
        return Err(Error::NotControllable);
    }
    let hall = HallGraph::new(g, roots);
    let matching = hall.maximum_matching();
    let mut row_of = vec![usize::MAX; g.id_bound()];
    for (i, v) in hall.ids.iter().enumerate() {
        row_of[v.index()] = i;
    }

    let mut reports = Vec::new();
    for e in g.edges() {
        let row = row_of[e.target.index()];
        let col = row_of[e.source.index()];
        let mut critical = !all_reachable_without(g, roots, e);
        if !critical && matching.row_to_col[row] == Some(col) {
            let mut dense = hall.dense.clone();
            dense.rows[row].retain(|&c| c != col);
            let mut repaired = matching.clone();
            repaired.row_to_col[row] = None;
            repaired.col_to_row[col] = None;
            repaired.size -= 1;
            let repaired = hopcroft_karp(&dense, None, repaired);
            critical = repaired.size < hall.ids.len();
        }
        if critical {
            reports.push(failure_witness(g, roots, e)?);
        }
    }
    Ok(reports)
}

fn all_reachable_without(g: &Digraph, roots: &RootSet, skip: Edge) -> bool {
    let mut seen = vec![false; g.id_bound()];
    let mut queue: VecDeque<Vertex> = roots.iter().collect();
    for r in roots.iter() {
        seen[r.index()] = true;
    }
    let mut count = queue.len();
    while let Some(u) = queue.pop_front() {
        for &w in g.out_neighbours(u) {
            if !seen[w.index()] && !(u == skip.source && w == skip.target) {
                seen[w.index()] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == g.vertex_count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResilienceVerdict {
    pub passed: bool,
    /// Whether the intact graph is controllable at all.
    pub base_controllable: bool,
    pub scope: EdgeScope,
    pub edges_tested: usize,
    /// Edges whose removal breaks controllability, ascending.
    pub violators: Vec<Edge>,
}

/// Removes every in-scope edge in turn and re-runs the full controllability
/// test from scratch. Deliberately shares no state with [`critical_edge_scan`].
pub fn verify_single_edge_resilience(
    g: &Digraph,
    roots: &RootSet,
    scope: EdgeScope,
) -> Result<ResilienceVerdict> {
    let base_controllable = is_controllable(g, roots)?;
    let mut violators = Vec::new();
    let mut edges_tested = 0;
    for e in g.edges().filter(|&e| scope.admits(roots, e)) {
        edges_tested += 1;
        if !is_controllable(&g.without_edge(e)?, roots)? {
            violators.push(e);
        }
    }
    Ok(ResilienceVerdict {
        passed: base_controllable && violators.is_empty(),
        base_controllable,
        scope,
        edges_tested,
        violators,
    })
}

fn non_root_edges(g: &Digraph, roots: &RootSet) -> Vec<Edge> {
    g.edges().filter(|&e| !roots.is_root_edge(e)).collect()
}

/// Some `size`-subset of `edges` whose joint removal breaks controllability.
fn breaking_combination(
    g: &Digraph,
    roots: &RootSet,
    edges: &[Edge],
    size: usize,
) -> Result<Option<Vec<Edge>>> {
    if size > edges.len() {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let chosen: Vec<Edge> = idx.iter().map(|&i| edges[i]).collect();
        if !is_controllable(&g.without_edges(&chosen)?, roots)? {
            return Ok(Some(chosen));
        }
        // next combination in lexicographic order
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] != i + edges.len() - size {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_k(g: &Digraph, roots: &RootSet, k: usize) -> Result<()> {
    if k > MAX_BRUTE_FORCE_K {
        return Err(Error::KTooLarge {
            k,
            bound: MAX_BRUTE_FORCE_K,
        });
    }
    if !is_controllable(g, roots)? {
        return Err(Error::NotControllable);
    }
    Ok(())
}

/// True iff removing any fewer than `k` non-root edges keeps `(g, roots)`
/// structurally controllable.
pub fn is_k_edge_controllable(g: &Digraph, roots: &RootSet, k: usize) -> Result<bool> {
    check_k(g, roots, k)?;
    if k <= 1 {
        return Ok(true);
    }
    let single_ok = critical_edge_scan(g, roots)?
        .iter()
        .all(|r| roots.is_root_edge(r.edge));
    if !single_ok {
        return Ok(false);
    }
    let edges = non_root_edges(g, roots);
    for size in 2..k {
        if breaking_combination(g, roots, &edges, size)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeIndex {
    Exact(usize),
    /// No combination of fewer non-root edges breaks controllability.
    AtLeast(usize),
}

/// Smallest number of non-root edges whose joint removal breaks
/// controllability, searched exhaustively up to `max_k`.
pub fn edge_controllability_index(g: &Digraph, roots: &RootSet, max_k: usize) -> Result<EdgeIndex> {
    check_k(g, roots, max_k)?;
    let edges = non_root_edges(g, roots);
    for size in 1..=max_k {
        if breaking_combination(g, roots, &edges, size)?.is_some() {
            return Ok(EdgeIndex::Exact(size));
        }
    }
    Ok(EdgeIndex::AtLeast(max_k + 1))
}

/// A set `S` with `|S| = |N^-(S)|` that keeps this equality after any
/// single state edge from `N^-(S)` into `S` is removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub members: VertexSet,
    /// State in-neighbours of the members.
    pub in_neighbours: VertexSet,
    /// Members that are roots; their inputs complete `N^-(S)`.
    pub input_neighbours: VertexSet,
}

impl CriticalSet {
    pub fn neighbourhood_len(&self) -> usize {
        self.in_neighbours.len() + self.input_neighbours.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSetSearch {
    pub sets: Vec<CriticalSet>,
    pub max_size: usize,
    /// False when sets larger than `max_size` exist and were not examined.
    pub complete: bool,
}

/// Number of subsets of size `1..=max_size` of an `n`-set, saturating.
pub fn subsets_up_to(n: usize, max_size: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=max_size.min(n) {
        binom = binom * (n - k + 1) as u128 / k as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Enumerates every critical set with at most `max_size` members. Inputs of
/// `roots` count as in-neighbours; input edges themselves never fail.
pub fn critical_sets(g: &Digraph, roots: &RootSet, max_size: usize) -> Result<CriticalSetSearch> {
    if max_size > MAX_CRITICAL_SET_SIZE {
        return Err(Error::CriticalSetBound {
            size: max_size,
            bound: MAX_CRITICAL_SET_SIZE,
        });
    }
    roots.validate(g)?;
    let vs = g.vertices();
    let limit = max_size.min(vs.len());
    let mut sets = Vec::new();
    let mut member = vec![false; g.id_bound()];
    for size in 1..=limit {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let s: VertexSet = idx.iter().map(|&i| vs[i]).collect();
            let n = in_neighbourhood(g, roots, &s);
            if n.len() == s.len() {
                for v in &s {
                    member[v.index()] = true;
                }
                let robust = n.states.iter().all(|&x| {
                    g.out_neighbours(x)
                        .iter()
                        .filter(|w| member[w.index()])
                        .count()
                        >= 2
                });
                for v in &s {
                    member[v.index()] = false;
                }
                if robust {
                    sets.push(CriticalSet {
                        members: s,
                        in_neighbours: n.states,
                        input_neighbours: n.inputs,
                    });
                }
            }
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if idx[i] != i + vs.len() - size {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(CriticalSetSearch {
        sets,
        max_size,
        complete: max_size >= vs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_set;
    use proptest::prelude::*;

    fn fig2() -> Digraph {
        Digraph::build(5, [(1, 2), (3, 2), (3, 4), (3, 5), (4, 3), (5, 3)], false).unwrap()
    }

    #[test]
    fn fig2_critical_edges_and_witnesses() {
        let reports = critical_edge_scan(&fig2(), &RootSet::from_ids([1, 5])).unwrap();
        let edges: Vec<Edge> = reports.iter().map(|r| r.edge).collect();
        assert_eq!(
            edges,
            vec![Edge::new(1, 2), Edge::new(3, 4), Edge::new(5, 3)]
        );
        assert_eq!(reports[0].witness_kind, WitnessKind::DilationSet);
        assert_eq!(reports[0].witness_s, Some(vertex_set([2, 4])));
        assert_eq!(reports[0].witness_x, None);
        assert_eq!(reports[1].witness_x, Some(vertex_set([4])));
        assert_eq!(reports[2].witness_x, Some(vertex_set([3, 4])));
        assert_eq!(reports[2].witness_s, None);
    }

    #[test]
    fn failure_witness_rejects_harmless_edges() {
        let g = fig2();
        let roots = RootSet::from_ids([1, 5]);
        assert_eq!(
            failure_witness(&g, &roots, Edge::new(4, 3)),
            Err(Error::NotCritical(Edge::new(4, 3)))
        );
        assert_eq!(
            failure_witness(&g, &roots, Edge::new(2, 1)),
            Err(Error::UnknownEdge(Edge::new(2, 1)))
        );
    }

    #[test]
    fn scan_requires_controllable_input() {
        assert_eq!(
            critical_edge_scan(&fig2(), &RootSet::from_ids([1])),
            Err(Error::NotControllable)
        );
    }

    #[test]
    fn complete_digraph_has_no_critical_edges() {
        let pairs: Vec<(u32, u32)> = (1..=3)
            .flat_map(|u| (1..=3).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let g = Digraph::build(3, pairs, false).unwrap();
        assert!(critical_edge_scan(&g, &RootSet::from_ids([1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn index_examples() {
        let roots = RootSet::from_ids([1, 5]);
        assert_eq!(
            edge_controllability_index(&fig2(), &roots, 3).unwrap(),
            EdgeIndex::Exact(1)
        );
        assert!(!is_k_edge_controllable(&fig2(), &roots, 2).unwrap());
        assert!(is_k_edge_controllable(&fig2(), &roots, 1).unwrap());
        let cycle = Digraph::build(3, [(1, 2), (2, 3), (3, 1)], false).unwrap();
        assert_eq!(
            edge_controllability_index(&cycle, &RootSet::from_ids([1]), 2).unwrap(),
            EdgeIndex::Exact(1)
        );
        assert_eq!(
            is_k_edge_controllable(&fig2(), &roots, 4),
            Err(Error::KTooLarge { k: 4, bound: 3 })
        );
    }

    #[test]
    fn edgeless_graph_with_all_roots_passes() {
        let g = Digraph::build(3, [], false).unwrap();
        let v =
            verify_single_edge_resilience(&g, &RootSet::from_ids([1, 2, 3]), EdgeScope::NonRoot)
                .unwrap();
        assert!(v.passed);
        assert_eq!(v.edges_tested, 0);
    }

    #[test]
    fn single_edge_has_no_critical_set() {
        let g = Digraph::build(2, [(1, 2)], false).unwrap();
        let found = critical_sets(&g, &RootSet::default(), 2).unwrap();
        assert!(found.sets.is_empty());
        assert!(found.complete);
        assert!(critical_sets(&g, &RootSet::default(), 13).is_err());
    }

    #[test]
    fn double_edges_form_a_critical_set() {
        // 1 and 2 both feed 3 and 4, so {3, 4} survives losing any one edge.
        let g = Digraph::build(4, [(1, 3), (1, 4), (2, 3), (2, 4)], false).unwrap();
        let found = critical_sets(&g, &RootSet::from_ids([1, 2]), 4).unwrap();
        let members: Vec<VertexSet> = found.sets.iter().map(|c| c.members.clone()).collect();
        assert!(members.contains(&vertex_set([3, 4])));
        assert!(
            members.contains(&vertex_set([1])),
            "a root alone is matched by its input"
        );
    }

    fn arb_case(max_d: u32) -> impl Strategy<Value = (Digraph, RootSet)> {
        (2..=max_d).prop_flat_map(|d| {
            (
                proptest::collection::vec((1..=d, 1..=d), 0..(3 * d as usize)),
                proptest::collection::btree_set(1..=d, 1..=(d as usize)),
            )
                .prop_map(move |(pairs, roots)| {
                    (
                        Digraph::build(d, pairs, false).unwrap(),
                        RootSet::from_ids(roots),
                    )
                })
        })
    }

    /// Re-enumerates critical sets over bitmasks, recomputing `N^-` on the
    /// graph with each edge physically removed.
    fn oracle_critical_sets(g: &Digraph, roots: &RootSet) -> Vec<VertexSet> {
        let vs = g.vertices();
        let mut out = Vec::new();
        for mask in 1u32..(1 << vs.len()) {
            let s: VertexSet = (0..vs.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| vs[i])
                .collect();
            if in_neighbourhood(g, roots, &s).len() != s.len() {
                continue;
            }
            let stable = g.edges().filter(|e| s.contains(&e.target)).all(|e| {
                let h = g.without_edge(e).unwrap();
                in_neighbourhood(&h, roots, &s).len() == s.len()
            });
            if stable {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn scan_matches_exhaustive_verifier((g, roots) in arb_case(8)) {
            prop_assume!(is_controllable(&g, &roots).unwrap());
            let scan = critical_edge_scan(&g, &roots).unwrap();
            let all = verify_single_edge_resilience(&g, &roots, EdgeScope::All).unwrap();
            let scanned: Vec<Edge> = scan.iter().map(|r| r.edge).collect();
            prop_assert_eq!(&scanned, &all.violators);
            // root edges never break anything
            prop_assert!(scanned.iter().all(|e| !roots.is_root_edge(*e)));
            let nonroot = verify_single_edge_resilience(&g, &roots, EdgeScope::NonRoot).unwrap();
            prop_assert_eq!(is_k_edge_controllable(&g, &roots, 2).unwrap(), nonroot.passed);
            for r in &scan {
                let h = g.without_edge(r.edge).unwrap();
                prop_assert!(r.witness_x.is_some() || r.witness_s.is_some());
                if let Some(x) = &r.witness_x {
                    prop_assert!(x.iter().all(|v| !roots.contains(*v)));
                    let reach = h.reachable_from(roots.members());
                    prop_assert!(x.iter().all(|v| !reach.contains(v)));
                    let dag = scc_dag(&h);
                    let c = dag.component_of(*x.iter().next().unwrap());
                    prop_assert_eq!(&dag.component_set(c), x);
                    prop_assert_eq!(dag.in_degree[c], 0);
                }
                if let Some(s) = &r.witness_s {
                    prop_assert!(in_neighbourhood(&h, &roots, s).len() < s.len());
                    prop_assert!(s.iter().all(|v| !roots.contains(*v)));
                }
            }
        }

        #[test]
        fn critical_sets_match_oracle((g, roots) in arb_case(7)) {
            let found = critical_sets(&g, &roots, 7).unwrap();
            prop_assert!(found.complete);
            let mut ours: Vec<VertexSet> = found.sets.iter().map(|c| c.members.clone()).collect();
            ours.sort();
            prop_assert_eq!(ours, oracle_critical_sets(&g, &roots));
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_up_to(4, 4), 15);
        assert_eq!(subsets_up_to(14, 12), (1 << 14) - 1 - 14 - 1);
        assert_eq!(subsets_up_to(3, 0), 0);
    }
}
