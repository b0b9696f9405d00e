//! Two-step synthesis of a root set that survives any single edge failure.
//!
//! Step 1 cuts the graph into vertex-disjoint controllable subgraphs, scans
//! each for critical edges and covers the resulting failure witnesses with
//! extra roots (greedy set cover). Step 2 grows the union of the subgraphs
//! back into the full graph: a vertex is attached when the augmentation
//! conditions hold, otherwise it becomes a root, and the leftover edges are
//! added last. The outcome is always re-verified by exhaustive single-edge
//! removal; if that fails the whole graph is scanned directly instead.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::controllability::{dedicated_input_configuration, is_controllable, HallGraph};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge, RootSet, Vertex, VertexSet};
use crate::matching::DenseMatching;
use crate::resilience::{
    critical_edge_scan, critical_sets, subsets_up_to, verify_single_edge_resilience,
    CriticalEdgeReport, CriticalSet, CriticalSetSearch, EdgeScope, ResilienceVerdict, WitnessKind,
    MAX_CRITICAL_SET_SIZE,
};

/// Analyst-supplied subgraph: a vertex list and, optionally, the edges kept.
/// Without an edge list the induced subgraph is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphSpec {
    pub vertices: VertexSet,
    pub edges: Option<Vec<Edge>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionMode {
    Auto,
    Explicit(Vec<SubgraphSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Digraph,
    /// The supplied roots that lie in this subgraph.
    pub roots: RootSet,
    pub max_out_degree: usize,
    /// Out-degree is at most two, so covering source-SCC witnesses alone
    /// is enough; otherwise dilation witnesses are covered as well.
    pub x_witnesses_suffice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub subgraphs: Vec<Subgraph>,
    pub covered_vertices: VertexSet,
}

impl Decomposition {
    /// The graph itself as a single part, covering every witness kind.
    pub fn whole_graph(g: &Digraph, roots: &RootSet) -> Self {
        Decomposition {
            subgraphs: vec![Subgraph {
                graph: g.clone(),
                roots: roots.restricted_to(g),
                max_out_degree: g.max_out_degree(),
                x_witnesses_suffice: false,
            }],
            covered_vertices: g.vertex_set(),
        }
    }

    /// Union of all parts as one digraph.
    pub fn union_graph(&self) -> Result<Digraph> {
        Digraph::from_parts(
            self.covered_vertices.iter().copied(),
            self.subgraphs
                .iter()
                .flat_map(|s| s.graph.edges().collect::<Vec<_>>()),
        )
    }
}

fn subgraph_error(index: usize, reason: impl Into<String>) -> Error {
    Error::Subgraph {
        index,
        reason: reason.into(),
    }
}

pub fn decompose(g: &Digraph, roots: &RootSet, mode: &DecompositionMode) -> Result<Decomposition> {
    roots.validate(g)?;
    if !is_controllable(g, roots)? {
        return Err(Error::NotControllable);
    }
    match mode {
        DecompositionMode::Explicit(specs) => decompose_explicit(g, roots, specs),
        DecompositionMode::Auto => decompose_auto(g, roots),
    }
}

fn decompose_explicit(
    g: &Digraph,
    roots: &RootSet,
    specs: &[SubgraphSpec],
) -> Result<Decomposition> {
    if specs.is_empty() {
        return Err(subgraph_error(0, "no subgraphs supplied"));
    }
    let mut covered = VertexSet::new();
    let mut subgraphs = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let index = i + 1;
        if spec.vertices.is_empty() {
            return Err(subgraph_error(index, "empty vertex list"));
        }
        for &v in &spec.vertices {
            if !g.contains(v) {
                return Err(subgraph_error(
                    index,
                    format!("{v} is not a vertex of the graph"),
                ));
            }
            if !covered.insert(v) {
                return Err(subgraph_error(
                    index,
                    format!("{v} already belongs to another subgraph"),
                ));
            }
        }
        let graph = match &spec.edges {
            None => g.induced(&spec.vertices)?,
            Some(edges) => {
                for e in edges {
                    if !g.has_edge(*e) {
                        return Err(subgraph_error(
                            index,
                            format!("edge {e} is not in the graph"),
                        ));
                    }
                    if !spec.vertices.contains(&e.source) || !spec.vertices.contains(&e.target) {
                        return Err(subgraph_error(
                            index,
                            format!("edge {e} leaves the subgraph"),
                        ));
                    }
                }
                Digraph::from_parts(spec.vertices.iter().copied(), edges.iter().copied())?
            }
        };
        let sub_roots = roots.restricted_to(&graph);
        if !is_controllable(&graph, &sub_roots)? {
            return Err(subgraph_error(
                index,
                "subgraph not controllable w.r.t. the roots it contains",
            ));
        }
        let max_out_degree = graph.max_out_degree();
        if max_out_degree > 2 {
            return Err(subgraph_error(
                index,
                format!("maximum out-degree {max_out_degree} exceeds 2"),
            ));
        }
        subgraphs.push(Subgraph {
            graph,
            roots: sub_roots,
            max_out_degree,
            x_witnesses_suffice: true,
        });
    }
    Ok(Decomposition {
        subgraphs,
        covered_vertices: covered,
    })
}

/// Matching-path construction. With every root matched to its own input, a
/// saturating matching splits the vertices into stems (paths hanging off a
/// root) and cycles. Stems are kept whole; a cycle is attached through one
/// extra edge from an already kept vertex whose out-degree is still below
/// two. Cycles that cannot be attached are left for augmentation.
fn decompose_auto(g: &Digraph, roots: &RootSet) -> Result<Decomposition> {
    let hall = HallGraph::new(g, roots);
    let n = hall.ids.len();
    let mut start = DenseMatching::empty(&hall.dense);
    for (row, cols) in hall.dense.rows.iter().enumerate() {
        if let Some(&input) = cols.iter().find(|&&c| c >= n) {
            start.row_to_col[row] = Some(input);
            start.col_to_row[input] = Some(row);
            start.size += 1;
        }
    }
    let m = crate::matching::hopcroft_karp(&hall.dense, None, start);
    if m.size < n {
        return Err(Error::NotControllable);
    }
    let mut successor: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (row, col) in m.row_to_col.iter().enumerate() {
        let col = col.expect("saturating matching");
        if col < n {
            successor.insert(hall.ids[col], hall.ids[row]);
        }
    }

    let mut kept = VertexSet::new();
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let link = |e: Edge, edges: &mut BTreeSet<Edge>| {
        edges.insert(e);
    };
    for root in roots.iter() {
        let mut v = root;
        kept.insert(v);
        while let Some(&w) = successor.get(&v) {
            if !kept.insert(w) {
                break;
            }
            link(
                Edge {
                    source: v,
                    target: w,
                },
                &mut edges,
            );
            v = w;
        }
    }

    // Remaining vertices lie on matched cycles.
    let mut cycles: Vec<Vec<Vertex>> = Vec::new();
    let mut seen = kept.clone();
    for &v in g.vertices() {
        if seen.contains(&v) {
            continue;
        }
        let mut cycle = vec![v];
        seen.insert(v);
        let mut w = successor[&v];
        while w != v {
            cycle.push(w);
            seen.insert(w);
            w = successor[&w];
        }
        cycles.push(cycle);
    }

    let mut pending = cycles;
    loop {
        let mut attached_any = false;
        let mut still = Vec::new();
        for cycle in pending {
            let members: VertexSet = cycle.iter().copied().collect();
            let attach = g.edges().find(|e| {
                kept.contains(&e.source)
                    && members.contains(&e.target)
                    && edges_out(&edges, e.source) < 2
            });
            match attach {
                Some(e) => {
                    link(e, &mut edges);
                    for (i, &v) in cycle.iter().enumerate() {
                        kept.insert(v);
                        let next = cycle[(i + 1) % cycle.len()];
                        link(
                            Edge {
                                source: v,
                                target: next,
                            },
                            &mut edges,
                        );
                    }
                    attached_any = true;
                }
                None => still.push(cycle),
            }
        }
        pending = still;
        if !attached_any || pending.is_empty() {
            break;
        }
    }

    // Spare out-degree goes to further edges, reverse edges first: a two-way
    // stem turns its failure witnesses into nested suffixes that one root covers.
    let reverse: Vec<Edge> = edges.iter().map(|e| e.reversed()).collect();
    let others: Vec<Edge> = g.edges().collect();
    for e in reverse.into_iter().chain(others) {
        if kept.contains(&e.source)
            && kept.contains(&e.target)
            && g.has_edge(e)
            && edges_out(&edges, e.source) < 2
        {
            link(e, &mut edges);
        }
    }

    let graph = Digraph::from_parts(kept.iter().copied(), edges.iter().copied())?;
    let sub_roots = roots.restricted_to(&graph);
    let max_out_degree = graph.max_out_degree();
    if graph.vertex_count() == 0 || !is_controllable(&graph, &sub_roots)? || max_out_degree > 2 {
        return Err(Error::Internal(
            "auto decomposition produced an invalid subgraph".into(),
        ));
    }
    Ok(Decomposition {
        covered_vertices: kept,
        subgraphs: vec![Subgraph {
            graph,
            roots: sub_roots,
            max_out_degree,
            x_witnesses_suffice: true,
        }],
    })
}

fn edges_out(edges: &BTreeSet<Edge>, v: Vertex) -> usize {
    edges
        .range(
            Edge {
                source: v,
                target: Vertex(0),
            }..,
        )
        .take_while(|e| e.source == v)
        .count()
}

/// Where a witness set came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOrigin {
    /// 1-based subgraph index.
    pub subgraph: usize,
    pub edge: Edge,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub vertices: VertexSet,
    pub origins: Vec<WitnessOrigin>,
}

/// The cover universe: distinct witness sets in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub sets: Vec<WitnessSet>,
    /// Critical edges per subgraph, in subgraph order.
    pub scans: Vec<Vec<CriticalEdgeReport>>,
}

pub fn collect_witnesses(d: &Decomposition) -> Result<WitnessFamily> {
    let mut sets: Vec<WitnessSet> = Vec::new();
    let mut scans = Vec::new();
    for (i, sub) in d.subgraphs.iter().enumerate() {
        let scan = critical_edge_scan(&sub.graph, &sub.roots)?;
        for report in &scan {
            let mut found = Vec::new();
            if let Some(x) = &report.witness_x {
                found.push((x, WitnessKind::SourceScc));
            }
            if !sub.x_witnesses_suffice {
                if let Some(s) = &report.witness_s {
                    found.push((s, WitnessKind::DilationSet));
                }
            }
            for (vertices, kind) in found {
                let origin = WitnessOrigin {
                    subgraph: i + 1,
                    edge: report.edge,
                    kind,
                };
                match sets.iter_mut().find(|w| &w.vertices == vertices) {
                    Some(w) => w.origins.push(origin),
                    None => sets.push(WitnessSet {
                        vertices: vertices.clone(),
                        origins: vec![origin],
                    }),
                }
            }
        }
        scans.push(scan);
    }
    Ok(WitnessFamily { sets, scans })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPick {
    pub vertex: Vertex,
    /// Universe indices first covered by this pick.
    pub newly_covered: Vec<usize>,
}

/// Greedy set cover: repeatedly take the family covering the most uncovered
/// elements, ties to the smallest vertex. At most `H(n) <= ln n + 1` times
/// the optimum. `None` if the families cannot cover `0..universe_size`.
pub fn greedy_set_cover(
    universe_size: usize,
    families: &BTreeMap<Vertex, BTreeSet<usize>>,
) -> Option<Vec<CoverPick>> {
    let mut uncovered: BTreeSet<usize> = (0..universe_size).collect();
    let mut picks = Vec::new();
    while !uncovered.is_empty() {
        let mut best: Option<(Vertex, usize)> = None;
        for (&v, fam) in families {
            let gain = fam.intersection(&uncovered).count();
            if gain > best.map_or(0, |b| b.1) {
                best = Some((v, gain));
            }
        }
        let (vertex, _) = best?;
        let newly_covered: Vec<usize> = families[&vertex]
            .intersection(&uncovered)
            .copied()
            .collect();
        for i in &newly_covered {
            uncovered.remove(i);
        }
        picks.push(CoverPick {
            vertex,
            newly_covered,
        });
    }
    Some(picks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInstance {
    pub universe_size: usize,
    /// `F_j`: indices of the witness sets containing vertex `j`.
    pub families: BTreeMap<Vertex, BTreeSet<usize>>,
    /// Greedy picks in order.
    pub picks: Vec<CoverPick>,
}

impl CoverInstance {
    pub fn chosen(&self) -> VertexSet {
        self.picks.iter().map(|p| p.vertex).collect()
    }
}

/// Additional roots covering every witness set.
pub fn cover_additional_roots(w: &WitnessFamily, roots: &RootSet) -> Result<CoverInstance> {
    let mut families: BTreeMap<Vertex, BTreeSet<usize>> = BTreeMap::new();
    for (i, set) in w.sets.iter().enumerate() {
        if set.vertices.is_empty() || set.vertices.iter().any(|v| roots.contains(*v)) {
            return Err(Error::WitnessIntersectsRoots { index: i });
        }
        for &v in &set.vertices {
            families.entry(v).or_default().insert(i);
        }
    }
    let picks = greedy_set_cover(w.sets.len(), &families)
        .ok_or_else(|| Error::Internal("witness family cannot be covered".into()))?;
    Ok(CoverInstance {
        universe_size: w.sets.len(),
        families,
        picks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentOptions {
    /// Re-verify an accepted augmentation exhaustively.
    pub paranoid: bool,
    /// Largest critical set enumerated for the second condition.
    pub critical_set_bound: usize,
    /// Enumeration budget in subsets; the size bound shrinks to fit it.
    pub subset_budget: u128,
}

impl Default for AugmentOptions {
    fn default() -> Self {
        AugmentOptions {
            paranoid: false,
            critical_set_bound: MAX_CRITICAL_SET_SIZE,
            subset_budget: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentVerdict {
    pub vertex: Vertex,
    /// In-neighbours of the new vertex inside the current graph.
    pub in_neighbours: VertexSet,
    /// At least two in-neighbours.
    pub condition_a: bool,
    /// For every critical set whose in-neighbourhood meets the new vertex's,
    /// at least two in-neighbours lie outside it.
    pub condition_b: bool,
    pub offending_set: Option<CriticalSet>,
    pub critical_sets_examined: usize,
    /// False when large critical sets were not enumerated; acceptance then
    /// rests on the exhaustive check instead of the conditions.
    pub enumeration_complete: bool,
    /// Result of the exhaustive check on the grown graph, when it ran.
    pub oracle_resilient: Option<bool>,
    pub accepted: bool,
}

impl AugmentVerdict {
    /// Both conditions hold over a complete critical-set enumeration.
    pub fn conditions_hold(&self) -> bool {
        self.condition_a && self.condition_b && self.enumeration_complete
    }

    pub fn diagnostic(&self) -> Option<String> {
        if self.accepted {
            return None;
        }
        let mut why = if !self.condition_a {
            format!(
                "{} has {} in-neighbour(s) in the current graph, needs 2",
                self.vertex,
                self.in_neighbours.len()
            )
        } else if let Some(s) = &self.offending_set {
            let members: Vec<String> = s.members.iter().map(|v| v.to_string()).collect();
            format!(
                "{} has fewer than 2 in-neighbours outside N^-(S) of critical set {{{}}}",
                self.vertex,
                members.join(", ")
            )
        } else if self.oracle_resilient == Some(false) {
            format!("exhaustive check rejects adding {}", self.vertex)
        } else {
            format!("{} could not be certified", self.vertex)
        };
        why.push_str("; fallback: make it a root");
        Some(why)
    }
}

fn critical_sets_within_budget(
    g: &Digraph,
    roots: &RootSet,
    opts: &AugmentOptions,
) -> Result<CriticalSetSearch> {
    let n = g.vertex_count();
    let mut bound = opts.critical_set_bound.min(MAX_CRITICAL_SET_SIZE).min(n);
    while bound > 0 && subsets_up_to(n, bound) > opts.subset_budget {
        bound -= 1;
    }
    let mut search = critical_sets(g, roots, bound)?;
    search.complete = bound >= n;
    Ok(search)
}

fn evaluate_augmentation(
    current: &Digraph,
    roots: &RootSet,
    z: Vertex,
    edges: &[Edge],
    search: &CriticalSetSearch,
    opts: &AugmentOptions,
) -> Result<(AugmentVerdict, Digraph)> {
    let in_neighbours: VertexSet = edges
        .iter()
        .filter(|e| e.target == z && e.source != z)
        .map(|e| e.source)
        .collect();
    let condition_a = in_neighbours.len() >= 2;
    let mut offending_set = None;
    for s in &search.sets {
        let touches = in_neighbours.iter().any(|v| s.in_neighbours.contains(v));
        let outside = in_neighbours
            .iter()
            .filter(|v| !s.in_neighbours.contains(v))
            .count();
        if touches && outside < 2 {
            offending_set = Some(s.clone());
            break;
        }
    }
    let condition_b = offending_set.is_none();
    let grown = current.with_vertex(z, edges.iter().copied())?;
    let run_oracle = opts.paranoid || (condition_a && condition_b && !search.complete);
    let oracle_resilient = if run_oracle {
        Some(
            verify_single_edge_resilience(
                &grown,
                &roots.restricted_to(&grown),
                EdgeScope::NonRoot,
            )?
            .passed,
        )
    } else {
        None
    };
    let accepted = condition_a && condition_b && oracle_resilient != Some(false);
    Ok((
        AugmentVerdict {
            vertex: z,
            in_neighbours,
            condition_a,
            condition_b,
            offending_set,
            critical_sets_examined: search.sets.len(),
            enumeration_complete: search.complete,
            oracle_resilient,
            accepted,
        },
        grown,
    ))
}

fn require_resilient(g: &Digraph, roots: &RootSet) -> Result<()> {
    let v = verify_single_edge_resilience(g, roots, EdgeScope::NonRoot)?;
    if v.passed {
        Ok(())
    } else if !v.base_controllable {
        Err(Error::NotControllable)
    } else {
        Err(Error::NotResilient(v.violators.len()))
    }
}

/// Checks whether the new vertex `z` with the given edges can join `current`
/// without losing 2-edge controllability w.r.t. `roots`. `incoming` must end
/// at `z`, `outgoing` must start at it. Returns the verdict and, when
/// accepted, the grown graph.
pub fn augment_vertex(
    current: &Digraph,
    roots: &RootSet,
    z: Vertex,
    incoming: &[Edge],
    outgoing: &[Edge],
    opts: &AugmentOptions,
) -> Result<(AugmentVerdict, Option<Digraph>)> {
    if current.contains(z) {
        return Err(Error::VertexAlreadyPresent(z));
    }
    for e in incoming {
        if e.target != z {
            return Err(Error::UnknownEdge(*e));
        }
        if e.source != z && !current.contains(e.source) {
            return Err(Error::UnknownVertex(e.source));
        }
    }
    for e in outgoing {
        if e.source != z {
            return Err(Error::UnknownEdge(*e));
        }
        if e.target != z && !current.contains(e.target) {
            return Err(Error::UnknownVertex(e.target));
        }
    }
    let local_roots = roots.restricted_to(current);
    require_resilient(current, &local_roots)?;
    let search = critical_sets_within_budget(current, &local_roots, opts)?;
    let edges: Vec<Edge> = incoming.iter().chain(outgoing).copied().collect();
    let (verdict, grown) = evaluate_augmentation(current, roots, z, &edges, &search, opts)?;
    let grown = verdict.accepted.then_some(grown);
    Ok((verdict, grown))
}

/// Adds edges between existing vertices. Extra edges never hurt 2-edge
/// controllability; `paranoid` re-checks before and after anyway.
pub fn add_edges(
    current: &Digraph,
    roots: &RootSet,
    edges: &[Edge],
    paranoid: bool,
) -> Result<Digraph> {
    for e in edges {
        for v in [e.source, e.target] {
            if !current.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
    }
    let local_roots = roots.restricted_to(current);
    if paranoid {
        require_resilient(current, &local_roots)?;
    }
    let grown = current.with_edges(edges.iter().copied())?;
    if paranoid && require_resilient(&grown, &local_roots).is_err() {
        return Err(Error::Internal(
            "adding edges broke 2-edge controllability".into(),
        ));
    }
    Ok(grown)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Initial roots; a minimum dedicated input configuration when absent.
    pub roots: Option<RootSet>,
    /// Analyst-supplied subgraphs; the matching-path heuristic when absent.
    pub subgraphs: Option<Vec<SubgraphSpec>>,
    pub paranoid: bool,
    pub critical_set_bound: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            roots: None,
            subgraphs: None,
            paranoid: false,
            critical_set_bound: MAX_CRITICAL_SET_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthesisMode {
    Decomposed,
    WholeGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentAction {
    Attached,
    PromotedToRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationStep {
    pub vertex: Vertex,
    pub action: AugmentAction,
    pub edges: Vec<Edge>,
    /// Verdict of the last evaluation of this vertex, if it got that far.
    pub verdict: Option<AugmentVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphSummary {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub max_out_degree: usize,
    pub x_witnesses_suffice: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTiming {
    pub phase: &'static str,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub initial_roots: RootSet,
    pub additional_roots: VertexSet,
    pub final_roots: RootSet,
    pub mode: SynthesisMode,
    /// Why the decomposed route was abandoned, if it was.
    pub fallback_reason: Option<String>,
    pub subgraphs: Vec<SubgraphSummary>,
    pub witnesses: WitnessFamily,
    pub cover: CoverInstance,
    pub augmentation_log: Vec<AugmentationStep>,
    /// Edges added after all vertices were placed.
    pub added_edges: Vec<Edge>,
    /// Exhaustive single-edge check of the full graph w.r.t. the final roots.
    pub verification: ResilienceVerdict,
    pub timings: Vec<PhaseTiming>,
}

struct Attempt {
    subgraphs: Vec<SubgraphSummary>,
    witnesses: WitnessFamily,
    cover: CoverInstance,
    final_roots: RootSet,
    log: Vec<AugmentationStep>,
    added_edges: Vec<Edge>,
}

struct Clock {
    timings: Vec<PhaseTiming>,
    last: Instant,
}

impl Clock {
    fn new() -> Self {
        Clock {
            timings: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &'static str) {
        let now = Instant::now();
        self.timings.push(PhaseTiming {
            phase,
            millis: (now - self.last).as_secs_f64() * 1e3,
        });
        self.last = now;
    }
}

fn summarize(d: &Decomposition) -> Vec<SubgraphSummary> {
    d.subgraphs
        .iter()
        .map(|s| SubgraphSummary {
            vertices: s.graph.vertices().to_vec(),
            edges: s.graph.edges().collect(),
            max_out_degree: s.max_out_degree,
            x_witnesses_suffice: s.x_witnesses_suffice,
        })
        .collect()
}

fn cover_step(
    d: &Decomposition,
    roots: &RootSet,
    clock: &mut Clock,
) -> Result<(WitnessFamily, CoverInstance, RootSet)> {
    let witnesses = collect_witnesses(d)?;
    clock.lap("witnesses");
    let cover = cover_additional_roots(&witnesses, roots)?;
    clock.lap("cover");
    let final_roots = roots.union(&RootSet::new(cover.chosen()));
    Ok((witnesses, cover, final_roots))
}

fn grow(
    g: &Digraph,
    d: &Decomposition,
    roots: RootSet,
    opts: &SynthesisOptions,
    clock: &mut Clock,
) -> Result<(RootSet, Vec<AugmentationStep>, Vec<Edge>)> {
    let aug_opts = AugmentOptions {
        paranoid: opts.paranoid,
        critical_set_bound: opts.critical_set_bound,
        ..AugmentOptions::default()
    };
    let mut roots = roots;
    let mut current = d.union_graph()?;
    let mut remaining: VertexSet = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| !current.contains(*v))
        .collect();
    let mut log = Vec::new();
    let mut last_verdict: BTreeMap<Vertex, AugmentVerdict> = BTreeMap::new();

    while !remaining.is_empty() {
        let local_roots = roots.restricted_to(&current);
        require_resilient(&current, &local_roots)?;
        let search = critical_sets_within_budget(&current, &local_roots, &aug_opts)?;
        let mut attached = None;
        for &z in &remaining {
            let edges = edges_to_current(g, &current, z);
            let (verdict, grown) =
                evaluate_augmentation(&current, &roots, z, &edges, &search, &aug_opts)?;
            let accepted = verdict.accepted;
            last_verdict.insert(z, verdict);
            if accepted {
                attached = Some((z, edges, grown));
                break;
            }
        }
        let (z, edges, next, action) = match attached {
            Some((z, edges, grown)) => (z, edges, grown, AugmentAction::Attached),
            None => {
                let z = *remaining.iter().next().expect("nonempty");
                let edges = edges_to_current(g, &current, z);
                roots = roots.with(z);
                let grown = current.with_vertex(z, edges.iter().copied())?;
                (z, edges, grown, AugmentAction::PromotedToRoot)
            }
        };
        remaining.remove(&z);
        log.push(AugmentationStep {
            vertex: z,
            action,
            edges,
            verdict: last_verdict.remove(&z),
        });
        current = next;
    }
    clock.lap("augment");

    let missing: Vec<Edge> = g.edges().filter(|e| !current.has_edge(*e)).collect();
    let current = add_edges(&current, &roots, &missing, opts.paranoid)?;
    debug_assert_eq!(current, *g);
    clock.lap("add_edges");
    Ok((roots, log, missing))
}

/// Edges of `g` between `z` and the vertices of `current` (and a self-loop on
/// `z`, if any), incoming first.
fn edges_to_current(g: &Digraph, current: &Digraph, z: Vertex) -> Vec<Edge> {
    let mut edges: Vec<Edge> = g
        .in_neighbours(z)
        .iter()
        .filter(|&&u| u == z || current.contains(u))
        .map(|&u| Edge {
            source: u,
            target: z,
        })
        .collect();
    edges.extend(
        g.out_neighbours(z)
            .iter()
            .filter(|&&w| w != z && current.contains(w))
            .map(|&w| Edge {
                source: z,
                target: w,
            }),
    );
    edges
}

fn attempt_decomposed(
    g: &Digraph,
    roots: &RootSet,
    d: &Decomposition,
    opts: &SynthesisOptions,
    clock: &mut Clock,
) -> Result<Attempt> {
    let (witnesses, cover, step1_roots) = cover_step(d, roots, clock)?;
    let (final_roots, log, added_edges) = grow(g, d, step1_roots, opts, clock)?;
    Ok(Attempt {
        subgraphs: summarize(d),
        witnesses,
        cover,
        final_roots,
        log,
        added_edges,
    })
}

/// Runs the full pipeline; see the module docs.
pub fn synthesize(g: &Digraph, opts: &SynthesisOptions) -> Result<SynthesisResult> {
    let mut clock = Clock::new();
    let initial_roots = match &opts.roots {
        Some(r) => r.clone(),
        None => dedicated_input_configuration(g).roots,
    };
    initial_roots.validate(g)?;
    if !is_controllable(g, &initial_roots)? {
        return Err(Error::NotControllable);
    }
    let mode = match &opts.subgraphs {
        Some(specs) => DecompositionMode::Explicit(specs.clone()),
        None => DecompositionMode::Auto,
    };
    let decomposition = decompose(g, &initial_roots, &mode)?;
    clock.lap("decompose");

    let fallback_reason =
        match attempt_decomposed(g, &initial_roots, &decomposition, opts, &mut clock) {
            Ok(attempt) => {
                let verification =
                    verify_single_edge_resilience(g, &attempt.final_roots, EdgeScope::NonRoot)?;
                clock.lap("verify");
                if verification.passed {
                    return Ok(finish(
                        initial_roots,
                        attempt,
                        SynthesisMode::Decomposed,
                        None,
                        verification,
                        clock,
                    ));
                }
                format!(
                    "final verification found {} violating edge(s)",
                    verification.violators.len()
                )
            }
            Err(Error::NotResilient(k)) => {
                format!("an intermediate graph had {k} violating edge(s)")
            }
            Err(e @ (Error::Internal(_) | Error::NotControllable)) => e.to_string(),
            Err(e) => return Err(e),
        };

    let whole = Decomposition::whole_graph(g, &initial_roots);
    let (witnesses, cover, final_roots) = cover_step(&whole, &initial_roots, &mut clock)?;
    let verification = verify_single_edge_resilience(g, &final_roots, EdgeScope::NonRoot)?;
    clock.lap("verify");
    if !verification.passed {
        return Err(Error::Internal(format!(
            "whole-graph cover still leaves {} violating edge(s)",
            verification.violators.len()
        )));
    }
    let attempt = Attempt {
        subgraphs: summarize(&whole),
        witnesses,
        cover,
        final_roots,
        log: Vec::new(),
        added_edges: Vec::new(),
    };
    Ok(finish(
        initial_roots,
        attempt,
        SynthesisMode::WholeGraph,
        Some(fallback_reason),
        verification,
        clock,
    ))
}

fn finish(
    initial_roots: RootSet,
    attempt: Attempt,
    mode: SynthesisMode,
    fallback_reason: Option<String>,
    verification: ResilienceVerdict,
    clock: Clock,
) -> SynthesisResult {
    let additional_roots = attempt
        .final_roots
        .iter()
        .filter(|v| !initial_roots.contains(*v))
        .collect();
    SynthesisResult {
        initial_roots,
        additional_roots,
        final_roots: attempt.final_roots,
        mode,
        fallback_reason,
        subgraphs: attempt.subgraphs,
        witnesses: attempt.witnesses,
        cover: attempt.cover,
        augmentation_log: attempt.log,
        added_edges: attempt.added_edges,
        verification,
        timings: clock.timings,
    }
}
