//! Edge-controllability index: the fewest edge failures that can break
//! controllability, searched exhaustively for small k.
//!
//! cargo run --example edge_index

use edgectl::io::load_topology;
use edgectl::{edge_controllability_index, RootSet};

fn main() -> edgectl::Result<()> {
    let g = load_topology("ieee14")?;
    for roots in [
        vec![8, 10],
        vec![1, 8, 10, 14],
        vec![1, 3, 6, 8, 10, 12, 14],
    ] {
        let index = edge_controllability_index(&g, &RootSet::from_ids(roots.clone()), 3)?;
        println!("roots {roots:?}: {index:?}");
    }
    Ok(())
}
