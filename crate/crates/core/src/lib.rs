//! Polynomial invariants of fatgraphs, the chain complexes categorifying them,
//! and exact integral homology.

pub mod builders;
pub mod cube;
pub mod error;
pub mod fatgraph;
pub mod homology;
pub mod io;
pub mod laurent;
pub mod verify;

pub use error::{Error, Result};
pub use fatgraph::{
    AbstractGraph, BoundaryKey, Fatgraph, RawEdge, RawFatgraph, Sign, State, StateStats,
};
pub use laurent::LaurentPoly;
