//! Fixed inputs shared by the benchmarks.

use fathom::fatgraph::enumerate_rotation_systems;
use fathom::{AbstractGraph, Fatgraph};

/// Planar theta graph.
pub fn theta() -> Fatgraph {
    Fatgraph::new(
        vec![vec![0, 2, 4], vec![1, 5, 3]],
        vec![fathom::Sign::Minus; 3],
    )
    .expect("valid rotation system")
}

/// The complete graph on 4 vertices with its first planar rotation system.
pub fn k4_planar() -> Fatgraph {
    let g = AbstractGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        .expect("valid graph");
    enumerate_rotation_systems(&g, Some(0))
        .expect("within cap")
        .next()
        .expect("K4 is planar")
}

/// A one-vertex torus with two interlaced loops and a third loop.
pub fn torus_bouquet() -> Fatgraph {
    Fatgraph::new(vec![vec![0, 2, 1, 3, 4, 5]], vec![fathom::Sign::Minus; 3])
        .expect("valid rotation system")
}
