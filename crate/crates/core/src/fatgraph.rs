//! Fatgraphs as rotation systems and their spanning states.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of edges for state enumeration.
pub const DEFAULT_MAX_EDGES: usize = 20;
/// Default cap on the number of rotation systems enumerated for one graph.
pub const DEFAULT_MAX_ROTATION_SYSTEMS: u128 = 1_000_000;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[default]
    #[serde(rename = "-")]
    Minus,
}

/// A graph with loops and multi-edges allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AbstractGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::InvalidEndpoint {
                        edge: i,
                        endpoint: x,
                        vertices: n,
                    });
                }
            }
        }
        Ok(AbstractGraph { n, edges })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Number of connected components of the spanning subgraph with edge set `mask`.
    pub fn components(&self, mask: u64) -> usize {
        let mut uf = UnionFind::new(self.n);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                uf.union(a, b);
            }
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components(full_mask(self.edges.len())) == 1
    }
}

pub(crate) fn full_mask(e: usize) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        (1u64 << e) - 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            count: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.count -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }
}

/// Input-level description with arbitrary ids, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFatgraph {
    pub vertices: Vec<(i64, Vec<i64>)>,
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub id: i64,
    pub halves: [i64; 2],
    pub sign: Sign,
}

impl RawFatgraph {
    /// Checks the rotation-system invariants, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (id, _) in &self.vertices {
            if !seen.insert(*id) {
                return Err(Error::DuplicateId {
                    kind: "vertex",
                    id: *id,
                });
            }
        }
        seen.clear();
        let mut edge_halves = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.id) {
                return Err(Error::DuplicateId {
                    kind: "edge",
                    id: e.id,
                });
            }
            if e.halves[0] == e.halves[1] {
                return Err(Error::FixedPoint {
                    edge: e.id,
                    half: e.halves[0],
                });
            }
            for h in e.halves {
                if !edge_halves.insert(h) {
                    return Err(Error::DuplicateHalfEdge(h));
                }
            }
        }
        let mut rot_halves = BTreeSet::new();
        for (_, rot) in &self.vertices {
            for &h in rot {
                if !rot_halves.insert(h) {
                    return Err(Error::DuplicateHalfEdge(h));
                }
                if !edge_halves.contains(&h) {
                    return Err(Error::OrphanHalfEdge(h, "not paired by any edge"));
                }
            }
        }
        if let Some(&h) = edge_halves.difference(&rot_halves).next() {
            return Err(Error::OrphanHalfEdge(h, "not in any vertex rotation"));
        }
        Ok(())
    }
}

/// Which surface boundary circle a factor belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryKey {
    /// An orbit of σ∘α, as a bitmask of half-edges.
    Orbit(u128),
    /// A vertex with no present half-edge.
    Island(usize),
}

impl BoundaryKey {
    fn sort_key(&self) -> (u8, u32) {
        match *self {
            BoundaryKey::Orbit(m) => (0, m.trailing_zeros()),
            BoundaryKey::Island(v) => (1, v as u32),
        }
    }
}

/// Statistics of a spanning subfatgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateStats {
    pub v: usize,
    pub e: usize,
    pub k: usize,
    pub p: usize,
    pub n: usize,
    pub g: usize,
    pub h: usize,
    pub hs: usize,
}

#[derive(Clone, Debug)]
pub struct State<'a> {
    pub fatgraph: &'a Fatgraph,
    pub mask: u64,
    pub stats: StateStats,
}

/// Orientable fatgraph in normalized form: edge `i` owns half-edges `2i` and `2i+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fatgraph {
    rotations: Vec<Vec<usize>>,
    signs: Vec<Sign>,
    vertex_of: Vec<usize>,
    position: Vec<usize>,
}

impl Fatgraph {
    /// Builds a fatgraph from rotations over half-edges `0..2e`. Each rotation is
    /// stored starting at its smallest half-edge.
    pub fn new(mut rotations: Vec<Vec<usize>>, signs: Vec<Sign>) -> Result<Self> {
        for rot in rotations.iter_mut() {
            if let Some(i) = rot
                .iter()
                .enumerate()
                .min_by_key(|(_, &h)| h)
                .map(|(i, _)| i)
            {
                rot.rotate_left(i);
            }
        }
        let halves = 2 * signs.len();
        let mut vertex_of = vec![usize::MAX; halves];
        let mut position = vec![0; halves];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= halves {
                    return Err(Error::OrphanHalfEdge(h as i64, "not paired by any edge"));
                }
                if vertex_of[h] != usize::MAX {
                    return Err(Error::DuplicateHalfEdge(h as i64));
                }
                vertex_of[h] = v;
                position[h] = i;
            }
        }
        if let Some(h) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(Error::OrphanHalfEdge(
                h as i64,
                "not in any vertex rotation",
            ));
        }
        Ok(Fatgraph {
            rotations,
            signs,
            vertex_of,
            position,
        })
    }

    /// Validates and normalizes an input description. Vertices and edges are ordered by id.
    pub fn from_raw(raw: &RawFatgraph) -> Result<Self> {
        raw.validate()?;
        let mut edges: Vec<&RawEdge> = raw.edges.iter().collect();
        edges.sort_by_key(|e| e.id);
        let mut rename = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            rename.insert(e.halves[0], 2 * i);
            rename.insert(e.halves[1], 2 * i + 1);
        }
        let mut vertices: Vec<&(i64, Vec<i64>)> = raw.vertices.iter().collect();
        vertices.sort_by_key(|v| v.0);
        let rotations = vertices
            .iter()
            .map(|(_, rot)| rot.iter().map(|h| rename[h]).collect())
            .collect();
        Fatgraph::new(rotations, edges.iter().map(|e| e.sign).collect())
    }

    pub fn to_raw(&self) -> RawFatgraph {
        RawFatgraph {
            vertices: self
                .rotations
                .iter()
                .enumerate()
                .map(|(v, r)| (v as i64, r.iter().map(|&h| h as i64).collect()))
                .collect(),
            edges: self
                .signs
                .iter()
                .enumerate()
                .map(|(i, &sign)| RawEdge {
                    id: i as i64,
                    halves: [2 * i as i64, 2 * i as i64 + 1],
                    sign,
                })
                .collect(),
        }
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Fatgraph::new(vec![Vec::new(); n], Vec::new()).expect("empty fatgraph is valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.signs.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn vertex_of(&self, half: usize) -> usize {
        self.vertex_of[half]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.vertex_of[2 * e], self.vertex_of[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.endpoints(e);
        a == b
    }

    pub fn sign(&self, e: usize) -> Sign {
        self.signs[e]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn with_signs(&self, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != self.num_edges() {
            return Err(Error::Internal(format!(
                "{} signs for {} edges",
                signs.len(),
                self.num_edges()
            )));
        }
        Ok(Fatgraph {
            signs,
            ..self.clone()
        })
    }

    pub fn with_all_signs(&self, sign: Sign) -> Self {
        Fatgraph {
            signs: vec![sign; self.num_edges()],
            ..self.clone()
        }
    }

    pub fn positive_mask(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Sign::Plus)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn underlying_graph(&self) -> AbstractGraph {
        AbstractGraph {
            n: self.num_vertices(),
            edges: (0..self.num_edges()).map(|e| self.endpoints(e)).collect(),
        }
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.num_edges())
    }

    /// Next present half-edge after `h` in the rotation at its vertex.
    fn sigma_in(&self, h: usize, mask: u64) -> usize {
        let rot = &self.rotations[self.vertex_of[h]];
        let len = rot.len();
        let start = self.position[h];
        for step in 1..=len {
            let next = rot[(start + step) % len];
            if mask >> (next / 2) & 1 == 1 {
                return next;
            }
        }
        h
    }

    /// Boundary circles of the state `mask` in canonical order: orbits by minimal
    /// half-edge, then islands by vertex.
    pub fn boundary(&self, mask: u64) -> Vec<BoundaryKey> {
        let mut keys = self.boundary_orbits(mask);
        for v in 0..self.num_vertices() {
            if !self.rotations[v].iter().any(|&h| mask >> (h / 2) & 1 == 1) {
                keys.push(BoundaryKey::Island(v));
            }
        }
        keys.sort_by_key(BoundaryKey::sort_key);
        keys
    }

    fn boundary_orbits(&self, mask: u64) -> Vec<BoundaryKey> {
        let mut visited: u128 = 0;
        let mut keys = Vec::new();
        for e in 0..self.num_edges() {
            if mask >> e & 1 == 0 {
                continue;
            }
            for start in [2 * e, 2 * e + 1] {
                if visited >> start & 1 == 1 {
                    continue;
                }
                let mut orbit: u128 = 0;
                let mut h = start;
                loop {
                    orbit |= 1 << h;
                    h = self.sigma_in(h ^ 1, mask);
                    if h == start {
                        break;
                    }
                }
                visited |= orbit;
                keys.push(BoundaryKey::Orbit(orbit));
            }
        }
        keys
    }

    pub fn boundary_count(&self, mask: u64) -> usize {
        self.boundary(mask).len()
    }

    /// Connected components of the state as vertex bitmasks, ordered by minimal vertex.
    pub fn components(&self, mask: u64) -> Vec<u64> {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in 0..self.num_edges() {
            if mask >> e & 1 == 1 {
                let (a, b) = self.endpoints(e);
                uf.union(a, b);
            }
        }
        let mut by_root: BTreeMap<usize, u64> = BTreeMap::new();
        for v in 0..self.num_vertices() {
            *by_root.entry(uf.find(v)).or_default() |= 1 << v;
        }
        by_root.into_values().collect()
    }

    pub fn stats(&self, mask: u64) -> Result<StateStats> {
        let v = self.num_vertices();
        let e = mask.count_ones() as usize;
        let mut uf = UnionFind::new(v);
        for i in 0..self.num_edges() {
            if mask >> i & 1 == 1 {
                let (a, b) = self.endpoints(i);
                uf.union(a, b);
            }
        }
        let k = uf.count();
        let p = self.boundary_count(mask);
        let n = e + k - v;
        let twice = (k + n) as i64 - p as i64;
        if twice < 0 || twice % 2 != 0 {
            return Err(Error::Internal(format!("2g = {twice} for state {mask:#b}")));
        }
        let total = self.num_edges();
        let pos = self.positive_mask();
        let neg = self.full_mask() & !pos;
        let hs = (neg & !mask).count_ones() as usize + (pos & mask).count_ones() as usize;
        Ok(StateStats {
            v,
            e,
            k,
            p,
            n,
            g: (twice / 2) as usize,
            h: total - e,
            hs,
        })
    }

    pub fn genus(&self) -> usize {
        self.stats(self.full_mask())
            .map(|s| s.g)
            .expect("normalized fatgraph has consistent statistics")
    }

    pub fn state(&self, mask: u64) -> Result<State<'_>> {
        Ok(State {
            fatgraph: self,
            mask,
            stats: self.stats(mask)?,
        })
    }

    /// All spanning states in increasing bitmask order.
    pub fn states(&self) -> Result<impl Iterator<Item = State<'_>> + '_> {
        self.states_capped(DEFAULT_MAX_EDGES)
    }

    pub fn states_capped(&self, cap: usize) -> Result<impl Iterator<Item = State<'_>> + '_> {
        let e = self.num_edges();
        if e > cap.min(63) {
            return Err(Error::TooManyEdges {
                edges: e,
                cap: cap.min(63),
            });
        }
        Ok((0..1u64 << e)
            .map(move |mask| self.state(mask).expect("state statistics are consistent")))
    }

    pub fn delete_edge(&self, e: usize) -> Result<Self> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let rotations = self
            .rotations
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|&&h| h / 2 != e)
                    .map(|&h| if h / 2 > e { h - 2 } else { h })
                    .collect()
            })
            .collect();
        let mut signs = self.signs.clone();
        signs.remove(e);
        Fatgraph::new(rotations, signs)
    }

    pub fn contract_edge(&self, e: usize) -> Result<Self> {
        self.contract_edge_with_map(e).map(|(f, _)| f)
    }

    /// Contracts a non-loop edge; also returns where each old vertex went.
    /// The merged vertex sits at the slot of the endpoint of half-edge `2e`.
    pub fn contract_edge_with_map(&self, e: usize) -> Result<(Self, Vec<usize>)> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        if self.is_loop(e) {
            return Err(Error::LoopContraction(e));
        }
        let (h, h2) = (2 * e, 2 * e + 1);
        let (u, v) = self.endpoints(e);
        let rv = &self.rotations[v];
        let start = self.position[h2];
        let spliced: Vec<usize> = (1..rv.len()).map(|i| rv[(start + i) % rv.len()]).collect();
        let mut merged = Vec::new();
        for &x in &self.rotations[u] {
            if x == h {
                merged.extend_from_slice(&spliced);
            } else {
                merged.push(x);
            }
        }
        let renumber = |x: usize| if x / 2 > e { x - 2 } else { x };
        let mut rotations = Vec::new();
        let mut map = vec![0; self.num_vertices()];
        for (w, slot) in map.iter_mut().enumerate() {
            if w == v {
                continue;
            }
            *slot = rotations.len();
            let r = if w == u { &merged } else { &self.rotations[w] };
            rotations.push(r.iter().map(|&x| renumber(x)).collect());
        }
        map[v] = map[u];
        let mut signs = self.signs.clone();
        signs.remove(e);
        Ok((Fatgraph::new(rotations, signs)?, map))
    }

    pub fn disjoint_union(&self, other: &Fatgraph) -> Self {
        let shift = 2 * self.num_edges();
        let mut rotations = self.rotations.clone();
        rotations.extend(
            other
                .rotations
                .iter()
                .map(|r| r.iter().map(|h| h + shift).collect()),
        );
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        Fatgraph::new(rotations, signs).expect("union of valid fatgraphs is valid")
    }

    /// Renames edges so that new edge `i` is old edge `perm[i]`.
    pub fn relabel_edges(&self, perm: &[usize]) -> Result<Self> {
        let e = self.num_edges();
        if perm.len() != e
            || perm.iter().copied().collect::<BTreeSet<_>>().len() != e
            || perm.iter().any(|&p| p >= e)
        {
            return Err(Error::Internal(format!(
                "{perm:?} is not a permutation of {e} edges"
            )));
        }
        let mut inverse = vec![0; e];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let rotations = self
            .rotations
            .iter()
            .map(|r| r.iter().map(|&h| 2 * inverse[h / 2] + (h & 1)).collect())
            .collect();
        Fatgraph::new(rotations, perm.iter().map(|&old| self.signs[old]).collect())
    }

    /// Moves edge `e` to the last position, keeping the relative order of the others.
    pub fn move_edge_last(&self, e: usize) -> Result<Self> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let perm: Vec<usize> = (0..self.num_edges())
            .filter(|&i| i != e)
            .chain([e])
            .collect();
        self.relabel_edges(&perm)
    }
}

/// Number of rotation systems with one half-edge pinned per vertex: Π (deg−1)!.
pub fn rotation_system_count(g: &AbstractGraph) -> u128 {
    (0..g.n)
        .map(|v| (1..g.degree(v).max(1) as u128).product::<u128>())
        .product()
}

/// Every rotation system of `g`, optionally filtered by genus of the full edge set.
/// Edge `i = (a, b)` contributes half-edge `2i` at `a` and `2i+1` at `b`.
pub fn enumerate_rotation_systems(
    g: &AbstractGraph,
    genus_filter: Option<usize>,
) -> Result<RotationSystems> {
    enumerate_rotation_systems_capped(g, genus_filter, DEFAULT_MAX_ROTATION_SYSTEMS)
}

pub fn enumerate_rotation_systems_capped(
    g: &AbstractGraph,
    genus_filter: Option<usize>,
    cap: u128,
) -> Result<RotationSystems> {
    let count = rotation_system_count(g);
    if count > cap {
        return Err(Error::TooManyRotationSystems { count, cap });
    }
    let mut halves = vec![Vec::new(); g.n];
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        halves[a].push(2 * i);
        halves[b].push(2 * i + 1);
    }
    let choices = halves
        .into_iter()
        .map(|hs| match hs.split_first() {
            None => vec![Vec::new()],
            Some((&first, rest)) => rest
                .iter()
                .copied()
                .permutations(rest.len())
                .map(|p| std::iter::once(first).chain(p).collect())
                .collect(),
        })
        .collect();
    Ok(RotationSystems {
        choices,
        odometer: vec![0; g.n],
        done: false,
        signs: vec![Sign::Minus; g.edges.len()],
        genus_filter,
    })
}

pub struct RotationSystems {
    choices: Vec<Vec<Vec<usize>>>,
    odometer: Vec<usize>,
    done: bool,
    signs: Vec<Sign>,
    genus_filter: Option<usize>,
}

impl Iterator for RotationSystems {
    type Item = Fatgraph;

    fn next(&mut self) -> Option<Fatgraph> {
        while !self.done {
            let rotations = self
                .choices
                .iter()
                .zip(&self.odometer)
                .map(|(c, &i)| c[i].clone())
                .collect();
            let mut carry = true;
            for (slot, c) in self.odometer.iter_mut().zip(&self.choices).rev() {
                *slot += 1;
                if *slot < c.len() {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            self.done = carry;
            let fg = Fatgraph::new(rotations, self.signs.clone())
                .expect("enumerated rotation system is valid");
            if self.genus_filter.is_none_or(|g| fg.genus() == g) {
                return Some(fg);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop1() -> Fatgraph {
        Fatgraph::new(vec![vec![0, 1]], vec![Sign::Minus]).unwrap()
    }

    fn interleaved() -> Fatgraph {
        Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap()
    }

    fn path() -> Fatgraph {
        Fatgraph::new(vec![vec![0], vec![1]], vec![Sign::Minus]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let ok = RawFatgraph {
            vertices: vec![(0, vec![0, 1])],
            edges: vec![RawEdge {
                id: 0,
                halves: [0, 1],
                sign: Sign::Minus,
            }],
        };
        assert!(ok.validate().is_ok());
        let bad = RawFatgraph {
            vertices: vec![(0, vec![0, 1])],
            edges: vec![RawEdge {
                id: 0,
                halves: [0, 0],
                sign: Sign::Minus,
            }],
        };
        let err = bad.validate().unwrap_err();
        assert!(err.to_string().contains("α has fixed point"), "{err}");
        let p = RawFatgraph {
            vertices: vec![(0, vec![0]), (1, vec![1])],
            edges: vec![RawEdge {
                id: 0,
                halves: [0, 1],
                sign: Sign::Minus,
            }],
        };
        assert!(p.validate().is_ok());
        let orphan = RawFatgraph {
            vertices: vec![(0, vec![0, 1, 7])],
            edges: vec![RawEdge {
                id: 0,
                halves: [0, 1],
                sign: Sign::Minus,
            }],
        };
        assert_eq!(
            orphan.validate(),
            Err(Error::OrphanHalfEdge(7, "not paired by any edge"))
        );
    }

    #[test]
    fn boundary_and_genus_examples() {
        assert_eq!(loop1().boundary_count(1), 2);
        assert_eq!(loop1().stats(1).unwrap().g, 0);
        assert_eq!(interleaved().boundary_count(3), 1);
        assert_eq!(interleaved().stats(3).unwrap().g, 1);
        assert_eq!(Fatgraph::empty(1).boundary_count(0), 1);
        let s = path().stats(1).unwrap();
        assert_eq!((s.k, s.p, s.n, s.g), (1, 1, 0, 0));
    }

    #[test]
    fn state_enumeration() {
        let hs: Vec<_> = path().states().unwrap().map(|s| s.stats.h).collect();
        assert_eq!(hs, vec![1, 0]);
        let l: Vec<_> = loop1()
            .states()
            .unwrap()
            .map(|s| (s.stats.p, s.stats.g))
            .collect();
        assert_eq!(l, vec![(1, 0), (2, 0)]);
        assert_eq!(Fatgraph::empty(1).states().unwrap().count(), 1);
    }

    #[test]
    fn edits() {
        assert_eq!(loop1().delete_edge(0).unwrap(), Fatgraph::empty(1));
        assert_eq!(path().contract_edge(0).unwrap(), Fatgraph::empty(1));
        let two_cycle = Fatgraph::new(vec![vec![0, 2], vec![3, 1]], vec![Sign::Minus; 2]).unwrap();
        assert_eq!(two_cycle.delete_edge(1).unwrap(), path());
        assert_eq!(two_cycle.contract_edge(0).unwrap(), loop1());
        assert_eq!(loop1().contract_edge(0), Err(Error::LoopContraction(0)));
        let u = loop1().disjoint_union(&path());
        assert_eq!((u.num_edges(), u.num_vertices()), (2, 3));
    }

    #[test]
    fn rotation_system_examples() {
        let tri = AbstractGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let all: Vec<_> = enumerate_rotation_systems(&tri, None).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].genus(), 0);
        let theta = AbstractGraph::new(2, vec![(0, 1); 3]).unwrap();
        let mut genera: Vec<_> = enumerate_rotation_systems(&theta, None)
            .unwrap()
            .map(|f| f.genus())
            .collect();
        genera.sort();
        assert_eq!(genera, vec![0, 0, 1, 1]);
        let two_loops = AbstractGraph::new(1, vec![(0, 0); 2]).unwrap();
        let genera: BTreeSet<_> = enumerate_rotation_systems(&two_loops, None)
            .unwrap()
            .map(|f| f.genus())
            .collect();
        assert_eq!(
            enumerate_rotation_systems(&two_loops, None)
                .unwrap()
                .count(),
            6
        );
        assert_eq!(genera, BTreeSet::from([0, 1]));
    }

    #[test]
    fn rotation_cap() {
        let big = AbstractGraph::new(1, vec![(0, 0); 6]).unwrap();
        assert!(matches!(
            enumerate_rotation_systems_capped(&big, None, 100),
            Err(Error::TooManyRotationSystems { .. })
        ));
    }
}
