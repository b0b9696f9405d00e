//! Plain-text topology files, bundled datasets and subgraph lists.
//!
//! Topology format: the vertex count on the first content line, `directed`
//! or `undirected` on the second, then one `u v` edge per line. `#` starts a
//! comment and blank lines are ignored.
//!
//! Subgraph format: blocks opened by `subgraph directed|undirected`, each with
//! a `vertices ...` line and an optional `edges u-v ...` line. A block without
//! an edge line takes the induced subgraph.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge, Vertex, VertexSet};
use crate::synthesis::SubgraphSpec;

const IEEE14: &str = include_str!("../data/ieee14.topo");
const FIG2: &str = include_str!("../data/fig2.topo");
const IEEE14_SUBGRAPHS: &str = include_str!("../data/ieee14_paper.subgraphs");

/// Names accepted by [`load_topology`] besides file paths.
pub const BUILTIN_TOPOLOGIES: &[&str] = &["ieee14", "fig2"];
/// Names accepted by [`load_subgraphs`] besides file paths.
pub const BUILTIN_SUBGRAPHS: &[&str] = &["ieee14_paper.subgraphs"];

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_id(token: &str, line: usize) -> Result<u32> {
    token
        .parse::<u32>()
        .map_err(|_| parse_error(line, format!("`{token}` is not a vertex id")))
}

fn parse_mode(token: &str, line: usize) -> Result<bool> {
    match token {
        "directed" => Ok(false),
        "undirected" => Ok(true),
        other => Err(parse_error(
            line,
            format!("expected `directed` or `undirected`, found `{other}`"),
        )),
    }
}

pub fn parse_topology(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing vertex count"))?;
    let d = parse_id(header, line)?;
    if d == 0 {
        return Err(parse_error(line, "vertex count must be positive"));
    }
    let (line, mode) = lines
        .next()
        .ok_or_else(|| parse_error(line + 1, "missing edge mode"))?;
    let undirected = parse_mode(mode, line)?;
    let mut pairs = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens[..] else {
            return Err(parse_error(
                line,
                format!("expected `u v`, found `{content}`"),
            ));
        };
        let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
        for id in [u, v] {
            if id == 0 || id > d {
                return Err(parse_error(line, format!("vertex {id} is outside 1..={d}")));
            }
        }
        pairs.push((u, v));
    }
    Digraph::build(d, pairs, undirected)
}

/// Directed serialization; [`parse_topology`] reads it back to the same graph
/// when the vertices are exactly `1..=d`.
pub fn write_topology(g: &Digraph) -> String {
    let d = g.vertices().last().map_or(0, |v| v.id());
    let mut out = format!("{d}\ndirected\n");
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.source.id(), e.target.id()));
    }
    out
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn builtin_topology(name: &str) -> Result<Digraph> {
    match name {
        "ieee14" => parse_topology(IEEE14),
        "fig2" => parse_topology(FIG2),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// A bundled name or a file path. Existing files win over bundled names.
pub fn load_topology(source: &str) -> Result<Digraph> {
    let path = Path::new(source);
    if path.is_file() {
        return parse_topology(&read_file(path)?);
    }
    match builtin_topology(source) {
        Err(Error::UnknownBuiltin(_)) if source.contains(['/', '.']) => {
            read_file(path).and_then(|t| parse_topology(&t))
        }
        other => other,
    }
}

fn parse_edge_token(token: &str, line: usize) -> Result<(u32, u32)> {
    let (u, v) = token
        .split_once('-')
        .ok_or_else(|| parse_error(line, format!("expected `u-v`, found `{token}`")))?;
    Ok((parse_id(u, line)?, parse_id(v, line)?))
}

pub fn parse_subgraphs(text: &str) -> Result<Vec<SubgraphSpec>> {
    struct Block {
        line: usize,
        undirected: bool,
        vertices: Option<VertexSet>,
        edges: Option<Vec<Edge>>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        if keyword == "subgraph" {
            let mode = rest.first().copied().unwrap_or("directed");
            blocks.push(Block {
                line,
                undirected: parse_mode(mode, line)?,
                vertices: None,
                edges: None,
            });
            continue;
        }
        let block = blocks
            .last_mut()
            .ok_or_else(|| parse_error(line, "expected `subgraph` before this line"))?;
        match keyword {
            "vertices" => {
                if block.vertices.is_some() {
                    return Err(parse_error(line, "duplicate `vertices` line"));
                }
                let ids = rest
                    .iter()
                    .map(|t| parse_id(t, line).map(Vertex))
                    .collect::<Result<VertexSet>>()?;
                if ids.is_empty() {
                    return Err(parse_error(line, "empty vertex list"));
                }
                block.vertices = Some(ids);
            }
            "edges" => {
                if block.edges.is_some() {
                    return Err(parse_error(line, "duplicate `edges` line"));
                }
                let mut edges = Vec::new();
                for t in &rest {
                    let (u, v) = parse_edge_token(t, line)?;
                    edges.push(Edge::new(u, v));
                    if block.undirected && u != v {
                        edges.push(Edge::new(v, u));
                    }
                }
                block.edges = Some(edges);
            }
            other => return Err(parse_error(line, format!("unknown keyword `{other}`"))),
        }
    }
    blocks
        .into_iter()
        .map(|b| {
            let vertices = b
                .vertices
                .ok_or_else(|| parse_error(b.line, "subgraph has no `vertices` line"))?;
            Ok(SubgraphSpec {
                vertices,
                edges: b.edges,
            })
        })
        .collect()
}

pub fn load_subgraphs(source: &str) -> Result<Vec<SubgraphSpec>> {
    let path = Path::new(source);
    if path.is_file() {
        return parse_subgraphs(&read_file(path)?);
    }
    match source {
        "ieee14_paper.subgraphs" | "ieee14_paper" => parse_subgraphs(IEEE14_SUBGRAPHS),
        _ => parse_subgraphs(&read_file(path)?),
    }
}

/// Comma-separated vertex ids such as `8,10`.
pub fn parse_root_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_id(t, 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ieee14_has_forty_edges() {
        let g = load_topology("ieee14").unwrap();
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 40);
        assert!(g.has_edge(Edge::new(13, 6)));
    }

    #[test]
    fn fig2_builtin() {
        let g = builtin_topology("fig2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 6));
    }

    #[test]
    fn undirected_pair_expands() {
        let g = parse_topology("2\nundirected\n1 2\n").unwrap();
        let edges: Vec<Edge> = g.edges().collect();
        assert_eq!(edges, vec![Edge::new(1, 2), Edge::new(2, 1)]);
    }

    #[test]
    fn out_of_range_vertex_reports_line() {
        let err = parse_topology("14\ndirected\n# comment\n1 2\n3 99\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_topology(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_topology("3\nsideways\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_topology("3\ndirected\n1 2 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_topology("3\ndirected\n1 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_topology("0\ndirected\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(
            load_topology("ieee999"),
            Err(Error::UnknownBuiltin("ieee999".into()))
        );
        assert!(matches!(
            load_topology("/no/such/file.topo"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn bundled_subgraphs() {
        let specs = load_subgraphs("ieee14_paper.subgraphs").unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(
            specs[0].vertices,
            crate::graph::vertex_set([1, 2, 3, 4, 7, 8])
        );
        assert_eq!(specs[1].edges.as_ref().unwrap().len(), 10);
    }

    #[test]
    fn subgraph_errors_and_induced_default() {
        let specs = parse_subgraphs("subgraph directed\nvertices 1 2\n").unwrap();
        assert_eq!(specs[0].edges, None);
        assert!(matches!(
            parse_subgraphs("vertices 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_subgraphs("subgraph directed\nedges 1-2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_subgraphs("subgraph directed\nvertices 1 2\nedges 1:2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn root_lists() {
        assert_eq!(parse_root_list("8, 10").unwrap(), vec![8, 10]);
        assert!(parse_root_list("8,x").is_err());
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(
            (d, pairs) in (1u32..=12).prop_flat_map(|d| (Just(d), proptest::collection::vec((1..=d, 1..=d), 0..40)))
        ) {
            let g = Digraph::build(d, pairs, false).unwrap();
            prop_assert_eq!(parse_topology(&write_topology(&g)).unwrap(), g);
        }
    }
}
