//! Preimages and the closure of the periodic points under them.

pub mod graph;
pub mod preimages;

pub use graph::{classify_structure, preperiodic_closure, Component, GraphNode, PreperiodicGraph, MAX_CLASSIFY_NODES};
pub use preimages::rational_preimages;
