//! Local graph clustering by truncated lazy random walks, and a
//! randomized partitioner built on repeated local clustering.
//!
//! The crate centers on three pieces:
//!
//! - [`nibble::nibble`]: grows a low-conductance cluster around a seed
//!   vertex by evolving a truncated lazy random walk and sweeping each
//!   step's mass vector. Non-empty outputs are guaranteed to have
//!   conductance at most the target and volume at most 5/6 of the
//!   graph.
//! - [`partition::partition`]: repeatedly removes random clusters until
//!   a quarter of the volume is gone, yielding an approximate sparsest
//!   cut with exact unconditional volume and conductance bounds.
//! - [`oracle`]: independent brute-force implementations (dense walks,
//!   exhaustive conductance) used as ground truth in tests and exposed
//!   to the CLI for small graphs.
//!
//! All conductances, volumes and balances are exact integers or
//! rationals; floating point only appears in walk masses.

pub mod edgelist;
pub mod error;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod nibble;
pub mod oracle;
pub mod params;
pub mod partition;
pub mod report;
pub mod sweep;
pub mod walk;

pub use error::NibbleError;
pub use graph::{Frac, Graph, GraphRef, SubgraphView, Vertex, VertexSet};
pub use nibble::{nibble as nibble_from, CutReport, NibbleOutcome};
pub use params::{paper_constants, practical_constants, ConstantsProfile, NibbleParams};
pub use partition::{partition as partition_graph, PartitionTrace, RngState};
