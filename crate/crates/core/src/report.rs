//! Analysis reports: a versioned JSON document with sorted keys, and a plain
//! text summary of the same content.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::controllability::{ControllabilityVerdict, InputConfiguration};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge, RootSet, Vertex, VertexSet};
use crate::resilience::{CriticalEdgeReport, EdgeIndex, ResilienceVerdict};
use crate::synthesis::{
    AugmentAction, AugmentationStep, CoverPick, SubgraphSummary, SynthesisMode, SynthesisResult,
    WitnessSet,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
    /// Every edge has its reverse, i.e. the file could be written undirected.
    pub symmetric: bool,
}

impl InputDigest {
    pub fn of(source: &str, g: &Digraph) -> Self {
        InputDigest {
            source: source.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            symmetric: g.edges().all(|e| g.has_edge(e.reversed())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEdgeEntry {
    /// 1-based subgraph the edge was found in; absent for whole-graph scans.
    pub subgraph: Option<usize>,
    #[serde(flatten)]
    pub report: CriticalEdgeReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverTrace {
    pub universe_size: usize,
    pub picks: Vec<CoverPick>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub command: String,
    pub input: InputDigest,
    pub initial_roots: Vec<Vertex>,
    pub additional_roots: Vec<Vertex>,
    pub final_roots: Vec<Vertex>,
    pub controllability: Option<ControllabilityVerdict>,
    pub synthesis_mode: Option<SynthesisMode>,
    pub fallback_reason: Option<String>,
    pub subgraphs: Vec<SubgraphSummary>,
    pub critical_edges: Vec<CriticalEdgeEntry>,
    pub witnesses: Vec<WitnessSet>,
    pub cover: Option<CoverTrace>,
    pub augmentation_log: Vec<AugmentationStep>,
    pub added_edges: Vec<Edge>,
    pub verification: Option<ResilienceVerdict>,
    pub edge_index: Option<EdgeIndex>,
    pub seed: Option<u64>,
    /// Wall-clock time per phase; only filled on request since it breaks
    /// reproducibility.
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl AnalysisReport {
    pub fn new(command: &str, source: &str, g: &Digraph, roots: &RootSet) -> Self {
        let roots: Vec<Vertex> = roots.iter().collect();
        AnalysisReport {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            input: InputDigest::of(source, g),
            initial_roots: roots.clone(),
            additional_roots: Vec::new(),
            final_roots: roots,
            controllability: None,
            synthesis_mode: None,
            fallback_reason: None,
            subgraphs: Vec::new(),
            critical_edges: Vec::new(),
            witnesses: Vec::new(),
            cover: None,
            augmentation_log: Vec::new(),
            added_edges: Vec::new(),
            verification: None,
            edge_index: None,
            seed: None,
            timings_ms: None,
        }
    }

    pub fn from_synthesis(
        source: &str,
        g: &Digraph,
        result: &SynthesisResult,
        with_timings: bool,
    ) -> Self {
        let mut report = AnalysisReport::new("synthesize", source, g, &result.initial_roots);
        report.additional_roots = result.additional_roots.iter().copied().collect();
        report.final_roots = result.final_roots.iter().collect();
        report.synthesis_mode = Some(result.mode);
        report.fallback_reason = result.fallback_reason.clone();
        report.subgraphs = result.subgraphs.clone();
        let whole = result.mode == SynthesisMode::WholeGraph;
        report.critical_edges = result
            .witnesses
            .scans
            .iter()
            .enumerate()
            .flat_map(|(i, scan)| {
                scan.iter().map(move |r| CriticalEdgeEntry {
                    subgraph: (!whole).then_some(i + 1),
                    report: r.clone(),
                })
            })
            .collect();
        report.witnesses = result.witnesses.sets.clone();
        report.cover = Some(CoverTrace {
            universe_size: result.cover.universe_size,
            picks: result.cover.picks.clone(),
        });
        report.augmentation_log = result.augmentation_log.clone();
        report.added_edges = result.added_edges.clone();
        report.verification = Some(result.verification.clone());
        if with_timings {
            report.timings_ms = Some(
                result
                    .timings
                    .iter()
                    .map(|t| (t.phase.to_string(), t.millis))
                    .collect(),
            );
        }
        report
    }

    pub fn with_critical_edges(mut self, scan: &[CriticalEdgeReport]) -> Self {
        self.critical_edges = scan
            .iter()
            .map(|r| CriticalEdgeEntry {
                subgraph: None,
                report: r.clone(),
            })
            .collect();
        self
    }

    pub fn with_inputs(mut self, config: &InputConfiguration) -> Self {
        self.final_roots = config.roots.iter().collect();
        self.initial_roots = Vec::new();
        self.additional_roots = self.final_roots.clone();
        self
    }

    pub fn final_root_set(&self) -> RootSet {
        RootSet::new(self.final_roots.iter().copied())
    }

    /// Edges flagged critical anywhere in the report.
    pub fn critical_edge_set(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.critical_edges.iter().map(|c| c.report.edge).collect();
        edges.sort();
        edges.dedup();
        edges
    }

    /// Vertices promoted to roots or attached during augmentation, and
    /// edges added afterwards or brought in with an attached vertex.
    pub fn added_items(&self) -> (VertexSet, Vec<Edge>) {
        let vertices = self.augmentation_log.iter().map(|s| s.vertex).collect();
        let mut edges: Vec<Edge> = self
            .augmentation_log
            .iter()
            .flat_map(|s| s.edges.iter().copied())
            .chain(self.added_edges.iter().copied())
            .collect();
        edges.sort();
        edges.dedup();
        (vertices, edges)
    }

    pub fn to_json(&self) -> String {
        // Going through `Value` sorts every object's keys.
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut text = serde_json::to_string_pretty(&value).expect("value is serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(
            &mut out,
            format!(
                "{}: {} ({} vertices, {} edges)",
                self.command, self.input.source, self.input.vertices, self.input.edges
            ),
        );
        if !self.initial_roots.is_empty() {
            line(
                &mut out,
                format!("initial roots: {}", braces(&self.initial_roots)),
            );
        }
        if let Some(c) = &self.controllability {
            let verdict = if c.controllable {
                "controllable"
            } else {
                "NOT controllable"
            };
            line(&mut out, format!("verdict: {verdict}"));
            if !c.inaccessible_vertices.is_empty() {
                line(
                    &mut out,
                    format!("  inaccessible: {}", braces(&c.inaccessible_vertices)),
                );
            }
            if let Some(w) = &c.dilation_witness {
                line(&mut out, format!("  dilation: {}", braces(w)));
            }
        }
        if let Some(mode) = self.synthesis_mode {
            let mode = match mode {
                SynthesisMode::Decomposed => "decomposed",
                SynthesisMode::WholeGraph => "whole graph",
            };
            line(&mut out, format!("mode: {mode}"));
            if let Some(reason) = &self.fallback_reason {
                line(&mut out, format!("  fallback because {reason}"));
            }
            for (i, s) in self.subgraphs.iter().enumerate() {
                line(
                    &mut out,
                    format!(
                        "  G{}: vertices {}, {} edges, max out-degree {}",
                        i + 1,
                        braces(&s.vertices),
                        s.edges.len(),
                        s.max_out_degree
                    ),
                );
            }
        }
        if self.synthesis_mode.is_some() || !self.critical_edges.is_empty() {
            line(
                &mut out,
                format!("critical edges: {}", self.critical_edges.len()),
            );
        }
        for (i, c) in self.critical_edges.iter().enumerate() {
            let mut s = format!("  e{} = {}", i + 1, c.report.edge);
            if let Some(g) = c.subgraph {
                s.push_str(&format!(" in G{g}"));
            }
            if let Some(x) = &c.report.witness_x {
                s.push_str(&format!("  X = {}", braces(x)));
            }
            if let Some(w) = &c.report.witness_s {
                s.push_str(&format!("  S = {}", braces(w)));
            }
            line(&mut out, s);
        }
        if let Some(cover) = &self.cover {
            line(
                &mut out,
                format!("cover: {} witness set(s)", cover.universe_size),
            );
            for p in &cover.picks {
                line(
                    &mut out,
                    format!(
                        "  pick {} covering {} set(s)",
                        p.vertex,
                        p.newly_covered.len()
                    ),
                );
            }
        }
        for step in &self.augmentation_log {
            let what = match step.action {
                AugmentAction::Attached => "attached",
                AugmentAction::PromotedToRoot => "promoted to root",
            };
            line(
                &mut out,
                format!(
                    "augment {}: {what} ({} edges)",
                    step.vertex,
                    step.edges.len()
                ),
            );
        }
        if !self.added_edges.is_empty() {
            let edges: Vec<String> = self.added_edges.iter().map(|e| e.to_string()).collect();
            line(&mut out, format!("added edges: {}", edges.join(" ")));
        }
        if self.command != "check" && self.command != "critical" {
            line(
                &mut out,
                format!("additional roots: {}", braces(&self.additional_roots)),
            );
            line(
                &mut out,
                format!("final roots: {}", braces(&self.final_roots)),
            );
        }
        if let Some(v) = &self.verification {
            let status = if v.passed { "PASS" } else { "FAIL" };
            line(
                &mut out,
                format!(
                    "verification: {status} ({} edges removed one at a time)",
                    v.edges_tested
                ),
            );
            for e in &v.violators {
                line(&mut out, format!("  removing {e} breaks controllability"));
            }
        }
        if let Some(index) = self.edge_index {
            let s = match index {
                EdgeIndex::Exact(k) => format!("{k}"),
                EdgeIndex::AtLeast(k) => format!(">= {k}"),
            };
            line(&mut out, format!("edge controllability index: {s}"));
        }
        if let Some(t) = &self.timings_ms {
            for (phase, ms) in t {
                line(&mut out, format!("time {phase}: {ms:.3} ms"));
            }
        }
        out
    }
}

fn braces<'a, I: IntoIterator<Item = &'a Vertex>>(vs: I) -> String {
    let items: Vec<String> = vs.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllability::is_structurally_controllable;
    use crate::io::builtin_topology;

    #[test]
    fn empty_universe_report_lists_no_additional_roots() {
        let g = Digraph::build(2, [(1, 2), (2, 1)], false).unwrap();
        let result = crate::synthesis::synthesize(
            &g,
            &crate::synthesis::SynthesisOptions {
                roots: Some(RootSet::from_ids([1, 2])),
                ..Default::default()
            },
        )
        .unwrap();
        let json = AnalysisReport::from_synthesis("pair", &g, &result, false).to_json();
        assert!(json.contains("\"additional_roots\": []"));
        assert!(json.contains("\"schema\": 1"));
    }

    #[test]
    fn keys_are_sorted_and_round_trip() {
        let g = builtin_topology("fig2").unwrap();
        let roots = RootSet::from_ids([1, 5]);
        let mut report = AnalysisReport::new("critical", "fig2", &g, &roots)
            .with_critical_edges(&crate::resilience::critical_edge_scan(&g, &roots).unwrap());
        report.controllability = Some(is_structurally_controllable(&g, &roots).unwrap());
        let json = report.to_json();
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("additional_roots") < pos("command"));
        assert!(pos("command") < pos("critical_edges"));
        let back = AnalysisReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), json);
        assert_eq!(back.critical_edge_set().len(), 3);
    }

    #[test]
    fn text_summary_mentions_witnesses() {
        let g = builtin_topology("fig2").unwrap();
        let roots = RootSet::from_ids([1, 5]);
        let report = AnalysisReport::new("critical", "fig2", &g, &roots)
            .with_critical_edges(&crate::resilience::critical_edge_scan(&g, &roots).unwrap());
        let text = report.to_text();
        assert!(text.contains("S = {v2, v4}"), "{text}");
        assert!(text.contains("X = {v3, v4}"), "{text}");
    }

    #[test]
    fn bad_json_is_a_parse_error() {
        assert!(matches!(
            AnalysisReport::from_json("{"),
            Err(Error::Parse { .. })
        ));
    }
}
