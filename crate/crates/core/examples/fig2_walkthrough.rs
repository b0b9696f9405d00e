//! Controllability test and critical-edge scan on the five-state example.
//!
//! cargo run --example fig2_walkthrough

use edgectl::io::load_topology;
use edgectl::{critical_edge_scan, is_structurally_controllable, RootSet};

fn main() -> edgectl::Result<()> {
    let g = load_topology("fig2")?;
    for roots in [RootSet::from_ids([1]), RootSet::from_ids([1, 5])] {
        let v = is_structurally_controllable(&g, &roots)?;
        println!("roots {:?}: controllable = {}", roots.ids(), v.controllable);
        if !v.inaccessible_vertices.is_empty() {
            println!("  inaccessible: {:?}", v.inaccessible_vertices);
        }
    }

    let roots = RootSet::from_ids([1, 5]);
    for report in critical_edge_scan(&g, &roots)? {
        print!("critical {}", report.edge);
        if let Some(x) = &report.witness_x {
            print!("  leaves root-free source SCC {x:?}");
        }
        if let Some(s) = &report.witness_s {
            print!("  dilation {s:?}");
        }
        println!();
    }
    Ok(())
}
