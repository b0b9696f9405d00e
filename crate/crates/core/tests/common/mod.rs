//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here uses matchings or SCCs.

#![allow(dead_code)]

use edgectl::{Digraph, Edge, RootSet, Vertex, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertices reachable from the roots, by plain BFS over the edge list.
pub fn accessible(g: &Digraph, roots: &RootSet) -> VertexSet {
    let mut seen: VertexSet = roots.iter().filter(|v| g.contains(*v)).collect();
    let mut frontier: Vec<Vertex> = seen.iter().copied().collect();
    while let Some(u) = frontier.pop() {
        for e in g.edges() {
            if e.source == u && seen.insert(e.target) {
                frontier.push(e.target);
            }
        }
    }
    seen
}

/// `|N^-(S)|` counting one input per root in `S`.
pub fn in_neighbourhood_len(g: &Digraph, roots: &RootSet, s: &[Vertex]) -> usize {
    let states: VertexSet = g
        .edges()
        .filter(|e| s.contains(&e.target))
        .map(|e| e.source)
        .collect();
    states.len() + s.iter().filter(|v| roots.contains(**v)).count()
}

/// Accessibility plus Hall's condition over every nonempty subset.
pub fn brute_controllable(g: &Digraph, roots: &RootSet) -> bool {
    let vs = g.vertices();
    if accessible(g, roots).len() != vs.len() {
        return false;
    }
    assert!(vs.len() <= 16, "subset oracle is exponential");
    (1u32..(1 << vs.len())).all(|mask| {
        let s: Vec<Vertex> = (0..vs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| vs[i])
            .collect();
        in_neighbourhood_len(g, roots, &s) >= s.len()
    })
}

/// Every single non-root edge removal leaves the pair controllable,
/// judged by the subset oracle.
pub fn brute_two_edge(g: &Digraph, roots: &RootSet) -> bool {
    brute_controllable(g, roots)
        && g.edges()
            .filter(|e| !roots.contains(e.target))
            .all(|e| brute_controllable(&g.without_edge(e).unwrap(), roots))
}

pub fn random_digraph(rng: &mut ChaCha8Rng, d: u32, edge_prob: f64) -> Digraph {
    let mut pairs = Vec::new();
    for u in 1..=d {
        for v in 1..=d {
            if rng.gen_bool(edge_prob) {
                pairs.push((u, v));
            }
        }
    }
    Digraph::build(d, pairs, false).unwrap()
}

/// Random digraph whose out-degrees never exceed `max_out`.
pub fn random_bounded_out(rng: &mut ChaCha8Rng, d: u32, max_out: usize) -> Digraph {
    let mut pairs = Vec::new();
    let targets: Vec<u32> = (1..=d).collect();
    for u in 1..=d {
        let k = rng.gen_range(0..=max_out);
        for &v in targets.choose_multiple(rng, k) {
            pairs.push((u, v));
        }
    }
    Digraph::build(d, pairs, false).unwrap()
}

pub fn random_roots(rng: &mut ChaCha8Rng, d: u32, prob: f64) -> RootSet {
    RootSet::from_ids((1..=d).filter(|_| rng.gen_bool(prob)))
}

/// Sparse graph with about `m` random edges plus a Hamiltonian path from 1,
/// so that root 1 alone reaches everything.
pub fn random_sparse(rng: &mut ChaCha8Rng, d: u32, m: usize) -> Digraph {
    let mut order: Vec<u32> = (2..=d).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    let mut prev = 1;
    for &v in &order {
        pairs.push((prev, v));
        prev = v;
    }
    while pairs.len() < m {
        pairs.push((rng.gen_range(1..=d), rng.gen_range(1..=d)));
    }
    Digraph::build(d, pairs, false).unwrap()
}

pub fn subsets_of_size(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = subsets_of_size(&items[1..], k - 1);
    for s in &mut out {
        s.insert(0, items[0]);
    }
    out.extend(subsets_of_size(&items[1..], k));
    out
}

pub fn e(u: u32, v: u32) -> Edge {
    Edge::new(u, v)
}
