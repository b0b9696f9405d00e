//! Full two-step synthesis on the IEEE 14-bus network with the bundled
//! subgraph decomposition, starting from roots {8, 10}.
//!
//! cargo run --example ieee14_synthesis

use edgectl::io::{load_subgraphs, load_topology};
use edgectl::report::AnalysisReport;
use edgectl::{synthesize, RootSet, SynthesisOptions};

fn main() -> edgectl::Result<()> {
    let g = load_topology("ieee14")?;
    let opts = SynthesisOptions {
        roots: Some(RootSet::from_ids([8, 10])),
        subgraphs: Some(load_subgraphs("ieee14_paper.subgraphs")?),
        paranoid: true,
        ..SynthesisOptions::default()
    };
    let result = synthesize(&g, &opts)?;
    print!(
        "{}",
        AnalysisReport::from_synthesis("ieee14", &g, &result, true).to_text()
    );
    Ok(())
}
