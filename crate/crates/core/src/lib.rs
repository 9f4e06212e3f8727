//! Dynamic graph algorithms around maximal cliques, maximal independent sets
//! and triangle detection, together with executable adversary reductions
//! and brute-force oracles that cross-check them.

pub mod bmm;
pub mod clique;
pub mod connectivity;
pub mod decr_triangle;
pub mod experiment;
pub mod gen;
pub mod graph;
pub mod mis;
pub mod oracle;
pub mod reductions;
pub mod rng;
pub mod trace;
pub mod triangle_values;

pub use graph::{Edge, Graph, GraphError};
