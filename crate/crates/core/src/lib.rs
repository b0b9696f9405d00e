//! Dedicated actuator placement that keeps a linear system structurally
//! controllable after any single state-to-state edge is severed.
//!
//! The crate works purely on sparsity patterns. A [`Digraph`] holds the
//! nonzero structure of the state matrix, a [`RootSet`] names the states that
//! receive a dedicated input, and the modules build up from there:
//!
//! * [`matching`] and [`scc`]: bipartite matchings and the SCC condensation.
//! * [`controllability`]: the accessibility + no-dilation test and minimum
//!   dedicated input configurations.
//! * [`resilience`]: critical edges, their failure witnesses, critical sets,
//!   the edge-controllability index and an exhaustive single-edge verifier.
//! * [`synthesis`]: the two-step procedure (cover failure witnesses of
//!   controllable subgraphs with extra roots, then grow the subgraphs back)
//!   with a whole-graph fallback.
//! * [`io`], [`report`], [`dot`]: topology files, JSON/text reports and DOT export.

pub mod controllability;
pub mod dot;
pub mod error;
pub mod graph;
pub mod io;
pub mod matching;
pub mod report;
pub mod resilience;
pub mod scc;
pub mod synthesis;

pub use controllability::{
    dedicated_input_configuration, dilation_free, dilation_witness, is_controllable,
    is_structurally_controllable, ControllabilityVerdict, InputConfiguration,
};
pub use error::{Error, Result};
pub use graph::{vertex_set, Digraph, Edge, RootSet, Vertex, VertexSet};
pub use matching::{maximum_matching, BipartiteGraph, Matching};
pub use resilience::{
    critical_edge_scan, critical_sets, edge_controllability_index, failure_witness,
    is_k_edge_controllable, verify_single_edge_resilience, CriticalEdgeReport, CriticalSet,
    EdgeIndex, EdgeScope, ResilienceVerdict,
};
pub use scc::{scc_dag, SccDag};
pub use synthesis::{synthesize, SynthesisOptions, SynthesisResult};
