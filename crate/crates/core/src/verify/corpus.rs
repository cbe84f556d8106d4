//! Exhaustive corpora of small graphs and fatgraphs.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::Result;
use crate::fatgraph::{enumerate_rotation_systems, AbstractGraph, Fatgraph, Sign};

/// Canonical code of a fatgraph up to orientation-preserving relabeling of vertices,
/// edges and half-edges (signs included).
pub fn map_code(fg: &Fatgraph) -> Vec<Vec<u32>> {
    let darts = 2 * fg.num_edges();
    let sigma = |h: usize| {
        let rot = fg.rotation(fg.vertex_of(h));
        let i = rot
            .iter()
            .position(|&x| x == h)
            .expect("half-edge sits in its rotation");
        rot[(i + 1) % rot.len()]
    };
    let mut seen = vec![false; darts];
    let mut components: Vec<Vec<u32>> = Vec::new();
    for d in 0..darts {
        if seen[d] {
            continue;
        }
        let mut best: Option<Vec<u32>> = None;
        let mut members = Vec::new();
        for start in component_darts(d, &sigma) {
            members.push(start);
            let code = traverse(start, darts, &sigma, fg);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        for m in members {
            seen[m] = true;
        }
        components.push(best.expect("component has a dart"));
    }
    let isolated = fg.rotations().iter().filter(|r| r.is_empty()).count();
    components.sort();
    components.push(vec![u32::MAX, isolated as u32]);
    components
}

fn component_darts(d: usize, sigma: &impl Fn(usize) -> usize) -> Vec<usize> {
    let mut out = vec![d];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for y in [sigma(x), x ^ 1] {
            if !out.contains(&y) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

fn traverse(
    start: usize,
    darts: usize,
    sigma: &impl Fn(usize) -> usize,
    fg: &Fatgraph,
) -> Vec<u32> {
    let mut label = vec![u32::MAX; darts];
    let mut order = vec![start];
    label[start] = 0;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for y in [sigma(x), x ^ 1] {
            if label[y] == u32::MAX {
                label[y] = order.len() as u32;
                order.push(y);
            }
        }
        i += 1;
    }
    order
        .iter()
        .flat_map(|&x| {
            [
                label[sigma(x)],
                label[x ^ 1],
                (fg.sign(x / 2) == Sign::Plus) as u32,
            ]
        })
        .collect()
}

/// Every multigraph (loops allowed) on exactly `n` vertices with `e` edges, as sorted edge multisets.
fn multigraphs(n: usize, e: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    pairs.into_iter().combinations_with_replacement(e)
}

/// Canonical form of a multigraph under vertex permutations.
pub fn graph_code(g: &AbstractGraph) -> Vec<(usize, usize)> {
    (0..g.n)
        .permutations(g.n)
        .map(|p| {
            let mut es: Vec<(usize, usize)> = g
                .edges
                .iter()
                .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                .collect();
            es.sort_unstable();
            es
        })
        .min()
        .unwrap_or_default()
}

/// Multigraphs with 1..=`max_vertices` vertices and at most `max_edges` edges, one per isomorphism class.
pub fn graph_corpus(
    max_vertices: usize,
    max_edges: usize,
    simple: bool,
    connected: bool,
) -> Vec<AbstractGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for e in 0..=max_edges {
            for edges in multigraphs(n, e) {
                if simple
                    && (edges.iter().any(|&(a, b)| a == b)
                        || edges.windows(2).any(|w| w[0] == w[1]))
                {
                    continue;
                }
                let g = AbstractGraph { n, edges };
                if connected && !g.is_connected() {
                    continue;
                }
                if seen.insert((n, graph_code(&g))) {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// All fatgraphs with at most `max_vertices` vertices and `max_edges` edges, all edges negative,
/// one per isomorphism class of maps.
pub fn fatgraph_corpus(max_vertices: usize, max_edges: usize) -> Result<Vec<Fatgraph>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in graph_corpus(max_vertices, max_edges, false, false) {
        for fg in enumerate_rotation_systems(&g, None)? {
            if seen.insert(map_code(&fg)) {
                out.push(fg);
            }
        }
    }
    Ok(out)
}

/// Every sign assignment on every member, deduplicated up to isomorphism.
pub fn signed_corpus(base: &[Fatgraph]) -> Vec<Fatgraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for fg in base {
        let e = fg.num_edges();
        for bits in 0u64..1 << e {
            let signs = (0..e)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let s = fg.with_signs(signs).expect("sign count matches");
            if seen.insert(map_code(&s)) {
                out.push(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_identify_isomorphic_maps() {
        let a = Fatgraph::new(vec![vec![0, 2], vec![1, 3]], vec![Sign::Minus; 2]).unwrap();
        let b = a.relabel_edges(&[1, 0]).unwrap();
        assert_eq!(map_code(&a), map_code(&b));
        let planar = Fatgraph::new(vec![vec![0, 1, 2, 3]], vec![Sign::Minus; 2]).unwrap();
        let inter = Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap();
        assert_ne!(map_code(&planar), map_code(&inter));
        assert_ne!(map_code(&Fatgraph::empty(1)), map_code(&Fatgraph::empty(2)));
    }

    #[test]
    fn theta_embeddings_collapse_by_genus() {
        let theta = AbstractGraph::new(2, vec![(0, 1); 3]).unwrap();
        let codes: BTreeSet<_> = enumerate_rotation_systems(&theta, None)
            .unwrap()
            .map(|f| map_code(&f))
            .collect();
        assert_eq!(codes.len(), 2);
    }

    #[test]
    fn simple_graph_counts() {
        // Non-isomorphic simple graphs on exactly 4 vertices: 11.
        let four = graph_corpus(4, 6, true, false)
            .into_iter()
            .filter(|g| g.n == 4)
            .count();
        assert_eq!(four, 11);
        let connected_four = graph_corpus(4, 6, true, true)
            .into_iter()
            .filter(|g| g.n == 4)
            .count();
        assert_eq!(connected_four, 6);
    }
}
