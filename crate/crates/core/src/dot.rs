//! Graphviz DOT export. Roots are filled boxes, critical edges bold red,
//! vertices and edges added during augmentation dashed.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::graph::{Digraph, Edge, RootSet};
use crate::report::AnalysisReport;

pub fn export_dot(g: &Digraph, roots: &RootSet, report: Option<&AnalysisReport>) -> String {
    let critical: BTreeSet<Edge> = report
        .map(|r| r.critical_edge_set())
        .unwrap_or_default()
        .into_iter()
        .collect();
    let (added_vertices, added_edges) = report.map(|r| r.added_items()).unwrap_or_default();
    let added_edges: BTreeSet<Edge> = added_edges.into_iter().collect();

    let mut out = String::from("digraph G {\n");
    for &v in g.vertices() {
        let mut attrs = vec![format!("label=\"v{}\"", v.id())];
        let mut style = Vec::new();
        if roots.contains(v) {
            attrs.push("shape=box".into());
            attrs.push("fillcolor=\"lightblue\"".into());
            style.push("filled");
        }
        if added_vertices.contains(&v) {
            style.push("dashed");
        }
        if !style.is_empty() {
            attrs.push(format!("style=\"{}\"", style.join(",")));
        }
        let _ = writeln!(out, "  {} [{}];", v.id(), attrs.join(", "));
    }
    for e in g.edges() {
        let mut attrs = Vec::new();
        if critical.contains(&e) {
            attrs.push("color=\"red\"".to_string());
            attrs.push("penwidth=2".to_string());
            attrs.push("style=\"bold\"".to_string());
        } else if added_edges.contains(&e) {
            attrs.push("style=\"dashed\"".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {} -> {};", e.source.id(), e.target.id());
        } else {
            let _ = writeln!(
                out,
                "  {} -> {} [{}];",
                e.source.id(),
                e.target.id(),
                attrs.join(", ")
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_and_plain_edges() {
        let g = Digraph::build(2, [(1, 2)], false).unwrap();
        let dot = export_dot(&g, &RootSet::from_ids([1]), None);
        assert_eq!(
            dot,
            "digraph G {\n  1 [label=\"v1\", shape=box, fillcolor=\"lightblue\", style=\"filled\"];\n  2 [label=\"v2\"];\n  1 -> 2;\n}\n"
        );
    }
}
