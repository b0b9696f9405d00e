//! Graphviz rendering of a synthesis run: roots filled, critical edges red,
//! augmented vertices and edges dashed. Pipe the output into `dot -Tsvg`.
//!
//! cargo run --example dot_export > ieee14.dot

use edgectl::dot::export_dot;
use edgectl::io::{load_subgraphs, load_topology};
use edgectl::report::AnalysisReport;
use edgectl::{synthesize, RootSet, SynthesisOptions};

fn main() -> edgectl::Result<()> {
    let g = load_topology("ieee14")?;
    let result = synthesize(
        &g,
        &SynthesisOptions {
            roots: Some(RootSet::from_ids([8, 10])),
            subgraphs: Some(load_subgraphs("ieee14_paper.subgraphs")?),
            ..SynthesisOptions::default()
        },
    )?;
    let report = AnalysisReport::from_synthesis("ieee14", &g, &result, false);
    print!("{}", export_dot(&g, &result.final_roots, Some(&report)));
    Ok(())
}
