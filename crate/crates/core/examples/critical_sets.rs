//! Critical sets and the two augmentation conditions for a new vertex, plus
//! an exhaustive cross-check of the verdict.
//!
//! cargo run --example critical_sets

use edgectl::synthesis::{augment_vertex, AugmentOptions};
use edgectl::{critical_sets, Digraph, Edge, RootSet, Vertex};

fn main() -> edgectl::Result<()> {
    // roots 1 and 4 each feed both 2 and 3, so {2, 3} is tight whichever
    // single edge fails
    let g = Digraph::build(4, [(1, 2), (1, 3), (4, 2), (4, 3)], false)?;
    let roots = RootSet::from_ids([1, 4]);
    let search = critical_sets(&g, &roots, 4)?;
    for s in &search.sets {
        println!(
            "critical set {:?} with in-neighbours {:?}",
            s.members, s.in_neighbours
        );
    }

    let opts = AugmentOptions {
        paranoid: true,
        ..AugmentOptions::default()
    };
    for sources in [vec![2], vec![1, 4], vec![1, 2, 3], vec![2, 3]] {
        let incoming: Vec<Edge> = sources.iter().map(|&u| Edge::new(u, 5)).collect();
        let (verdict, _) = augment_vertex(&g, &roots, Vertex(5), &incoming, &[], &opts)?;
        println!(
            "new v5 fed by {sources:?}: conditions (a) {} (b) {}, exhaustive check {:?}, accepted {}",
            verdict.condition_a, verdict.condition_b, verdict.oracle_resilient, verdict.accepted
        );
        if let Some(why) = verdict.diagnostic() {
            println!("  {why}");
        }
    }
    Ok(())
}
