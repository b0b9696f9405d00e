//! Minimum number of dedicated inputs for a small sparse network, and the
//! synthesis of a failure-tolerant superset of them.
//!
//! cargo run --example dedicated_inputs

use edgectl::{dedicated_input_configuration, synthesize, Digraph, SynthesisOptions};

fn main() -> edgectl::Result<()> {
    // two-way ring of 13 with chords and a pendant tail
    let mut pairs: Vec<(u32, u32)> = (1..13).map(|i| (i, i + 1)).collect();
    pairs.extend([(13, 1), (1, 6), (3, 9), (4, 11), (13, 14)]);
    let g = Digraph::build(14, pairs, true)?;

    let config = dedicated_input_configuration(&g);
    println!("minimum dedicated inputs: {:?}", config.roots.ids());
    println!("  from unmatched states: {:?}", config.from_unmatched);
    println!(
        "  from root-free source components: {:?}",
        config.from_source_sccs
    );

    let result = synthesize(&g, &SynthesisOptions::default())?;
    println!(
        "tolerating one edge failure needs {:?} (verified: {})",
        result.final_roots.ids(),
        result.verification.passed
    );
    Ok(())
}
