//! Structural controllability under dedicated inputs.
//!
//! A pair `(g, roots)` is structurally controllable iff every state vertex is
//! reachable from a root and `G(A, B)` has no dilation. The dilation test
//! runs as a matching problem: every right copy of a state vertex must be
//! matched to a distinct in-neighbour, where a root's dedicated input counts
//! as one more in-neighbour. By Hall's theorem a deficient matching is the
//! same thing as a dilation, and the deficient set is read off the
//! alternating paths from an unmatched vertex.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Digraph, RootSet, Vertex, VertexSet};
use crate::matching::{
    alternating_rows, hopcroft_karp, minimal_violator, DenseBipartite, DenseMatching, Matching,
};
use crate::scc::scc_dag;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllabilityVerdict {
    pub controllable: bool,
    /// Vertices with no directed path from any root.
    pub inaccessible_vertices: VertexSet,
    /// An inclusion-minimal root-free set with fewer in-neighbours than members.
    pub dilation_witness: Option<VertexSet>,
}

/// `N^-(S)` in `G(A, B)`: state in-neighbours plus the inputs of roots in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InNeighbourhood {
    pub states: VertexSet,
    /// Roots in `S`; each contributes its own dedicated input vertex.
    pub inputs: VertexSet,
}

impl InNeighbourhood {
    pub fn len(&self) -> usize {
        self.states.len() + self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn in_neighbourhood(g: &Digraph, roots: &RootSet, set: &VertexSet) -> InNeighbourhood {
    let mut n = InNeighbourhood::default();
    for &v in set {
        n.states.extend(g.in_neighbours(v).iter().copied());
        if roots.contains(v) {
            n.inputs.insert(v);
        }
    }
    n
}

/// Input-augmented bipartite graph. Rows are the state vertices (right
/// copies); columns `0..n` are the left copies and `n..` the dedicated inputs.
pub(crate) struct HallGraph {
    pub dense: DenseBipartite,
    pub ids: Vec<Vertex>,
}

impl HallGraph {
    pub fn new(g: &Digraph, roots: &RootSet) -> Self {
        let ids = g.vertices().to_vec();
        let n = ids.len();
        let mut position = vec![usize::MAX; g.id_bound()];
        for (i, v) in ids.iter().enumerate() {
            position[v.index()] = i;
        }
        let mut next_input = n;
        let rows = ids
            .iter()
            .map(|&v| {
                let mut cols: Vec<usize> = g
                    .in_neighbours(v)
                    .iter()
                    .map(|u| position[u.index()])
                    .collect();
                if roots.contains(v) {
                    cols.push(next_input);
                    next_input += 1;
                }
                cols
            })
            .collect();
        HallGraph {
            dense: DenseBipartite {
                rows,
                n_cols: next_input,
            },
            ids,
        }
    }

    pub fn maximum_matching(&self) -> DenseMatching {
        hopcroft_karp(&self.dense, None, DenseMatching::empty(&self.dense))
    }

    /// The minimal deficient set behind an unsaturated maximum matching.
    pub fn witness(&self, m: &DenseMatching) -> Option<VertexSet> {
        let start = m.unmatched_rows(None).next()?;
        let rows = minimal_violator(&self.dense, alternating_rows(&self.dense, m, start));
        Some(rows.into_iter().map(|r| self.ids[r]).collect())
    }
}

/// Returns a minimal dilation of `G(A, B)`, or `None` when there is none.
pub fn dilation_witness(g: &Digraph, roots: &RootSet) -> Result<Option<VertexSet>> {
    roots.validate(g)?;
    let hall = HallGraph::new(g, roots);
    let m = hall.maximum_matching();
    Ok(hall.witness(&m))
}

pub fn dilation_free(g: &Digraph, roots: &RootSet) -> Result<bool> {
    Ok(dilation_witness(g, roots)?.is_none())
}

pub fn is_structurally_controllable(
    g: &Digraph,
    roots: &RootSet,
) -> Result<ControllabilityVerdict> {
    roots.validate(g)?;
    let reached = g.reachable_from(roots.members());
    let inaccessible_vertices: VertexSet = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| !reached.contains(v))
        .collect();
    let dilation_witness = dilation_witness(g, roots)?;
    Ok(ControllabilityVerdict {
        controllable: inaccessible_vertices.is_empty() && dilation_witness.is_none(),
        inaccessible_vertices,
        dilation_witness,
    })
}

/// Shorthand for `is_structurally_controllable(..)?.controllable`.
pub fn is_controllable(g: &Digraph, roots: &RootSet) -> Result<bool> {
    Ok(is_structurally_controllable(g, roots)?.controllable)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputConfiguration {
    pub roots: RootSet,
    /// Right vertices left unmatched by the chosen maximum matching.
    pub from_unmatched: VertexSet,
    /// One vertex (the smallest) per source SCC that no unmatched vertex covers.
    pub from_source_sccs: VertexSet,
    /// The maximum matching of `H(A)` the configuration was read from.
    pub matching: Matching,
}

/// Dedicated input configuration of minimum size.
///
/// The roots are the unmatched right vertices of a maximum matching of `H(A)`
/// plus one representative of every source SCC those miss. Maximum matchings
/// differ in which source SCCs their unmatched vertices land in, so the
/// matching is chosen to cover as many source SCCs as possible: starting from
/// a maximum matching, each source SCC gets a slack column adjacent to its
/// vertices and the matching is augmented further. Augmenting paths from a
/// slack column never change how many vertices the `H(A)` part matches, so it
/// stays maximum while the number of covered source SCCs is maximised.
pub fn dedicated_input_configuration(g: &Digraph) -> InputConfiguration {
    let ids = g.vertices().to_vec();
    let n = ids.len();
    let mut position = vec![usize::MAX; g.id_bound()];
    for (i, v) in ids.iter().enumerate() {
        position[v.index()] = i;
    }
    let state_rows: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| {
            g.in_neighbours(v)
                .iter()
                .map(|u| position[u.index()])
                .collect()
        })
        .collect();
    let plain = DenseBipartite {
        rows: state_rows.clone(),
        n_cols: n,
    };
    let base = hopcroft_karp(&plain, None, DenseMatching::empty(&plain));

    let dag = scc_dag(g);
    let sources: Vec<usize> = dag.source_components().collect();
    let mut rows = state_rows;
    for (k, &c) in sources.iter().enumerate() {
        for v in &dag.components[c] {
            rows[position[v.index()]].push(n + k);
        }
    }
    let slack = DenseBipartite {
        rows,
        n_cols: n + sources.len(),
    };
    let mut start = DenseMatching::empty(&slack);
    start.row_to_col.clone_from(&base.row_to_col);
    start.col_to_row[..n].clone_from_slice(&base.col_to_row);
    start.size = base.size;
    let m = hopcroft_karp(&slack, None, start);

    let mut pairs = Vec::new();
    let mut from_unmatched = VertexSet::new();
    for (row, col) in m.row_to_col.iter().enumerate() {
        match col {
            Some(c) if *c < n => pairs.push((ids[*c], ids[row])),
            _ => {
                from_unmatched.insert(ids[row]);
            }
        }
    }
    pairs.sort_unstable();
    let from_source_sccs: VertexSet = sources
        .iter()
        .enumerate()
        .filter(|&(k, _)| m.col_to_row[n + k].is_none())
        .map(|(_, &c)| dag.components[c][0])
        .collect();
    debug_assert!(sources
        .iter()
        .enumerate()
        .all(|(k, &c)| m.col_to_row[n + k].is_some()
            || dag.components[c]
                .iter()
                .all(|v| !from_unmatched.contains(v))));

    let matched_left: VertexSet = pairs.iter().map(|p| p.0).collect();
    let matching = Matching {
        unmatched_left: ids
            .iter()
            .copied()
            .filter(|v| !matched_left.contains(v))
            .collect(),
        unmatched_right: from_unmatched.clone(),
        pairs,
    };
    InputConfiguration {
        roots: RootSet::new(from_unmatched.union(&from_source_sccs).copied()),
        from_unmatched,
        from_source_sccs,
        matching,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::{vertex_set, Edge};
    use proptest::prelude::*;

    fn fig2() -> Digraph {
        Digraph::build(5, [(1, 2), (3, 2), (3, 4), (3, 5), (4, 3), (5, 3)], false).unwrap()
    }

    /// Every root-free subset, counting inputs of roots as in-neighbours.
    fn brute_force_has_dilation(g: &Digraph, roots: &RootSet) -> bool {
        let vs = g.vertices();
        (1u32..(1 << vs.len())).any(|mask| {
            let s: VertexSet = (0..vs.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| vs[i])
                .collect();
            in_neighbourhood(g, roots, &s).len() < s.len()
        })
    }

    #[test]
    fn fig2_controllable_with_two_roots() {
        let v = is_structurally_controllable(&fig2(), &RootSet::from_ids([1, 5])).unwrap();
        assert!(v.controllable);
        assert!(v.inaccessible_vertices.is_empty());
        assert!(v.dilation_witness.is_none());
    }

    #[test]
    fn fig2_single_root_is_inaccessible() {
        let v = is_structurally_controllable(&fig2(), &RootSet::from_ids([1])).unwrap();
        assert!(!v.controllable);
        assert!(v.inaccessible_vertices.is_superset(&vertex_set([3, 4, 5])));
    }

    #[test]
    fn fig2_minus_first_edge_has_dilation_v2_v4() {
        let g = fig2().without_edge(Edge::new(1, 2)).unwrap();
        let roots = RootSet::from_ids([1, 5]);
        assert!(!dilation_free(&g, &roots).unwrap());
        assert_eq!(
            dilation_witness(&g, &roots).unwrap(),
            Some(vertex_set([2, 4]))
        );
    }

    #[test]
    fn unknown_root_is_rejected() {
        assert_eq!(
            is_structurally_controllable(&fig2(), &RootSet::from_ids([9])),
            Err(Error::RootNotInGraph(Vertex(9)))
        );
    }

    #[test]
    fn fig1_cycle_needs_one_root() {
        let g = Digraph::build(3, [(1, 2), (2, 3), (3, 1)], false).unwrap();
        let cfg = dedicated_input_configuration(&g);
        assert_eq!(cfg.roots.len(), 1);
        assert!(cfg.from_unmatched.is_empty());
        assert_eq!(cfg.from_source_sccs, vertex_set([1]));
        assert!(is_controllable(&g, &cfg.roots).unwrap());
    }

    #[test]
    fn fig2_configuration_has_two_roots() {
        let g = fig2();
        let cfg = dedicated_input_configuration(&g);
        assert_eq!(cfg.roots.len(), 2);
        assert!(cfg.roots.contains(Vertex(1)));
        assert!(is_controllable(&g, &cfg.roots).unwrap());
        for v in g.vertices() {
            assert!(!is_controllable(&g, &RootSet::new([*v])).unwrap());
        }
    }

    #[test]
    fn slack_augmentation_fixes_bad_first_matching() {
        // 1 <-> 2 is a source SCC feeding 3. The first maximum matching leaves
        // 3 unmatched, which would need a second root for {1, 2}; leaving 2
        // unmatched instead needs only one.
        let g = Digraph::build(3, [(1, 2), (2, 1), (1, 3)], false).unwrap();
        let cfg = dedicated_input_configuration(&g);
        assert_eq!(cfg.roots.len(), 1);
        assert!(is_controllable(&g, &cfg.roots).unwrap());
        assert_eq!(cfg.matching.pairs.len(), 2);
    }

    fn arb_case(max_d: u32) -> impl Strategy<Value = (Digraph, RootSet)> {
        (1..=max_d).prop_flat_map(|d| {
            (
                proptest::collection::vec((1..=d, 1..=d), 0..(3 * d as usize)),
                proptest::collection::btree_set(1..=d, 0..=(d as usize)),
            )
                .prop_map(move |(pairs, roots)| {
                    (
                        Digraph::build(d, pairs, false).unwrap(),
                        RootSet::from_ids(roots),
                    )
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn dilation_check_agrees_with_subset_oracle((g, roots) in arb_case(6)) {
            let witness = dilation_witness(&g, &roots).unwrap();
            prop_assert_eq!(witness.is_some(), brute_force_has_dilation(&g, &roots));
            if let Some(s) = witness {
                prop_assert!(in_neighbourhood(&g, &roots, &s).len() < s.len());
                prop_assert!(s.iter().all(|v| !roots.contains(*v)));
                // no proper subset is deficient
                let members: Vec<Vertex> = s.iter().copied().collect();
                for mask in 1u32..((1 << members.len()) - 1) {
                    let sub: VertexSet = (0..members.len()).filter(|i| mask & (1 << i) != 0).map(|i| members[i]).collect();
                    prop_assert!(in_neighbourhood(&g, &roots, &sub).len() >= sub.len());
                }
            }
        }

        #[test]
        fn more_roots_or_edges_keep_controllability((g, roots) in arb_case(7), extra in 1u32..8, edge in (1u32..8, 1u32..8)) {
            prop_assume!(is_controllable(&g, &roots).unwrap());
            let d = g.vertex_count() as u32;
            let bigger = roots.with(Vertex((extra - 1) % d + 1));
            prop_assert!(is_controllable(&g, &bigger).unwrap());
            let e = Edge::new((edge.0 - 1) % d + 1, (edge.1 - 1) % d + 1);
            prop_assert!(is_controllable(&g.with_edges([e]).unwrap(), &roots).unwrap());
        }

        #[test]
        fn configuration_is_controllable((g, _r) in arb_case(9)) {
            let cfg = dedicated_input_configuration(&g);
            prop_assert!(is_controllable(&g, &cfg.roots).unwrap());
            prop_assert_eq!(cfg.matching.unmatched_right.len() + cfg.matching.pairs.len(), g.vertex_count());
            let plain = crate::matching::maximum_matching(&crate::matching::BipartiteGraph::of(&g));
            prop_assert_eq!(cfg.matching.pairs.len(), plain.size());
        }
    }
}
