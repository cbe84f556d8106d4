//! The complex families over the cube of states, and the chain maps between them.

mod maps;

pub use maps::*;

use serde::{Deserialize, Serialize};

use crate::cube::{
    component_mul, concat_blocks, frobenius_comul, frobenius_mul, genus_map, r_comul, ChainComplex,
    Cube, CubeState, Factor, FactorKind, Grading, Layout, MultiDegree, WordSum,
};
use crate::error::{Error, Result};
use crate::fatgraph::{AbstractGraph, BoundaryKey, Fatgraph, Sign, StateStats, DEFAULT_MAX_EDGES};

/// Default cap on the total number of generators of one complex.
pub const DEFAULT_MAX_GENERATORS: u128 = 1 << 22;

/// Environment variable overriding [`DEFAULT_MAX_GENERATORS`].
pub const MAX_GENERATORS_VAR: &str = "FATHOM_MAX_GENERATORS";

/// The generator cap from `FATHOM_MAX_GENERATORS`, or the default when unset.
pub fn max_generators_from_env() -> Result<u128> {
    match std::env::var(MAX_GENERATORS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_GENERATORS),
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{MAX_GENERATORS_VAR}={v:?} is not a non-negative integer"
            ))
        }),
        Err(e) => Err(Error::Parse(format!("{MAX_GENERATORS_VAR}: {e}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// V^{v+p+2g} ⊗ R^h {h}, edge removal.
    Chromatic,
    /// V^{v+p+2g} {h}, edge removal.
    Restricted,
    /// V^{v+p} ⊗ U^{2g} ⊗ R^{h_s} {h_s}, signed.
    Trigraded,
    /// V^{p} ⊗ U^{2g} {h_s}, signed.
    HatTrigraded,
    /// V^{p} {h_s}, signed, genus 0.
    Khovanov,
    /// M^{k}, edge addition.
    Hgr,
    /// M^{k} ⊗ V^{p} {e(H)}, edge addition, genus 0.
    B,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Chromatic,
        Family::Restricted,
        Family::Trigraded,
        Family::HatTrigraded,
        Family::Khovanov,
        Family::Hgr,
        Family::B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chromatic => "chromatic",
            Family::Restricted => "restricted",
            Family::Trigraded => "trigraded",
            Family::HatTrigraded => "hat-trigraded",
            Family::Khovanov => "khovanov",
            Family::Hgr => "hgr",
            Family::B => "b",
        }
    }

    pub fn grading(self) -> Grading {
        match self {
            Family::Chromatic | Family::Restricted | Family::Khovanov => Grading::Q,
            Family::Trigraded | Family::HatTrigraded => Grading::QRS,
            Family::Hgr => Grading::R,
            Family::B => Grading::QR,
        }
    }

    fn needs_genus_zero(self) -> bool {
        matches!(self, Family::Khovanov | Family::B)
    }

    /// Bits of edges whose cube coordinate is 1 when the edge is absent.
    fn flip_mask(self, fg: &Fatgraph) -> u64 {
        match self {
            Family::Chromatic | Family::Restricted => fg.full_mask(),
            Family::Trigraded | Family::HatTrigraded | Family::Khovanov => {
                fg.full_mask() & !fg.positive_mask()
            }
            Family::Hgr | Family::B => 0,
        }
    }

    fn layout(self, s: &StateStats, height: usize) -> Layout {
        let (components, vertices, genus_kind, coeffs) = match self {
            Family::Chromatic => (0, s.v, FactorKind::V, height),
            Family::Restricted => (0, s.v, FactorKind::V, 0),
            Family::Trigraded => (0, s.v, FactorKind::U, height),
            Family::HatTrigraded => (0, 0, FactorKind::U, 0),
            Family::Khovanov => (0, 0, FactorKind::V, 0),
            Family::Hgr => (s.k, 0, FactorKind::V, 0),
            Family::B => (s.k, 0, FactorKind::V, 0),
        };
        let boundary = if self == Family::Hgr { 0 } else { s.p };
        let genus = if matches!(self, Family::Hgr | Family::Khovanov | Family::B) {
            0
        } else {
            2 * s.g
        };
        Layout {
            components,
            vertices,
            boundary,
            genus,
            genus_kind,
            coeffs,
        }
    }

    fn shift(self, height: usize) -> MultiDegree {
        match self {
            Family::Hgr => MultiDegree::ZERO,
            _ => MultiDegree::q(height as i32),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_generators: u128,
    pub max_edges: usize,
    /// Assign boundary factors in reverse canonical order.
    pub reverse_boundary: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_generators: max_generators_from_env().unwrap_or(DEFAULT_MAX_GENERATORS),
            max_edges: DEFAULT_MAX_EDGES,
            reverse_boundary: false,
        }
    }
}

/// Data attached to one cube vertex while the per-edge maps are built.
#[derive(Clone, Debug)]
pub(crate) struct StateInfo {
    pub present: u64,
    pub stats: StateStats,
    pub boundary: Vec<BoundaryKey>,
    pub components: Vec<u64>,
}

pub(crate) fn state_infos(fg: &Fatgraph, flip: u64, opts: &BuildOptions) -> Result<Vec<StateInfo>> {
    let e = fg.num_edges();
    let cap = opts.max_edges.min(63);
    if e > cap {
        return Err(Error::TooManyEdges { edges: e, cap });
    }
    (0..1u64 << e)
        .map(|alpha| {
            let present = alpha ^ flip;
            let mut boundary = fg.boundary(present);
            if opts.reverse_boundary {
                boundary.reverse();
            }
            Ok(StateInfo {
                present,
                stats: fg.stats(present)?,
                boundary,
                components: fg.components(present),
            })
        })
        .collect()
}

/// Matches keys of two states: keys only in `src`, keys only in `tgt`.
fn key_diff<K: PartialEq + Copy>(src: &[K], tgt: &[K]) -> (Vec<usize>, Vec<usize>) {
    let gone = (0..src.len()).filter(|&i| !tgt.contains(&src[i])).collect();
    let new = (0..tgt.len()).filter(|&i| !src.contains(&tgt[i])).collect();
    (gone, new)
}

/// Applies merge or split along matched keys. `mul` handles the merge algebra; splits use △̃.
fn keyed_block<K: PartialEq + Copy>(
    src_keys: &[K],
    tgt_keys: &[K],
    factors: &[Factor],
    mul: fn(Factor, Factor) -> Result<Option<Factor>>,
) -> Result<WordSum> {
    let (gone, new) = key_diff(src_keys, tgt_keys);
    let carry = |t: usize| -> Factor {
        let s = src_keys
            .iter()
            .position(|k| *k == tgt_keys[t])
            .expect("unchanged key present in source");
        factors[s]
    };
    match (gone.len(), new.len()) {
        (0, 0) => Ok(vec![((0..tgt_keys.len()).map(carry).collect(), 1)]),
        (2, 1) => match mul(factors[gone[0]], factors[gone[1]])? {
            None => Ok(Vec::new()),
            Some(m) => Ok(vec![(
                (0..tgt_keys.len())
                    .map(|t| if t == new[0] { m } else { carry(t) })
                    .collect(),
                1,
            )]),
        },
        (1, 2) => Ok(frobenius_comul(factors[gone[0]])?
            .into_iter()
            .map(|(a, b)| {
                let w = (0..tgt_keys.len())
                    .map(|t| {
                        if t == new[0] {
                            a
                        } else if t == new[1] {
                            b
                        } else {
                            carry(t)
                        }
                    })
                    .collect();
                (w, 1)
            })
            .collect()),
        (g, n) => Err(Error::Internal(format!(
            "{g} circles vanish and {n} appear across one cube edge"
        ))),
    }
}

fn per_edge_map(
    family: Family,
    infos: &[StateInfo],
    src: &CubeState,
    tgt: &CubeState,
) -> Result<Vec<WordSum>> {
    let (si, ti) = (&infos[src.alpha as usize], &infos[tgt.alpha as usize]);
    let (sl, tl) = (&src.layout, &tgt.layout);
    let mut out = Vec::with_capacity(sl.size());
    for idx in 0..sl.size() {
        let word = sl.decode(idx);
        let mut blocks: Vec<WordSum> = Vec::new();
        if sl.components > 0 || tl.components > 0 {
            blocks.push(keyed_block(
                &si.components,
                &ti.components,
                &word[sl.component_range()],
                component_mul,
            )?);
        }
        blocks.push(vec![(word[sl.vertex_range()].to_vec(), 1)]);
        if family != Family::Hgr {
            blocks.push(keyed_block(
                &si.boundary,
                &ti.boundary,
                &word[sl.boundary_range()],
                frobenius_mul,
            )?);
        }
        if sl.genus > 0 || tl.genus > 0 {
            let g = genus_map(&word[sl.genus_range()], sl.genus_kind, tl.genus)?;
            blocks.push(g.into_iter().map(|w| (w, 1)).collect());
        }
        if tl.coeffs > 0 {
            blocks.push(
                r_comul(&word[sl.coeff_range()])?
                    .into_iter()
                    .map(|w| (w, 1))
                    .collect(),
            );
        }
        out.push(concat_blocks(&blocks));
    }
    Ok(out)
}

/// Builds the cube of `family` on `fg`.
pub fn build_cube(fg: &Fatgraph, family: Family, opts: &BuildOptions) -> Result<Cube> {
    if family.needs_genus_zero() {
        let g = fg.genus();
        if g != 0 {
            return Err(Error::NonzeroGenus(g));
        }
    }
    let flip = family.flip_mask(fg);
    let infos = state_infos(fg, flip, opts)?;
    let states: Vec<CubeState> = infos
        .iter()
        .enumerate()
        .map(|(alpha, info)| {
            let h = (alpha as u64).count_ones() as usize;
            CubeState {
                alpha: alpha as u64,
                present: info.present,
                layout: family.layout(&info.stats, h),
                shift: family.shift(h),
            }
        })
        .collect();
    let count: u128 = states.iter().map(|s| 1u128 << s.layout.len()).sum();
    if count > opts.max_generators {
        return Err(Error::TooManyGenerators {
            count,
            cap: opts.max_generators,
        });
    }
    Cube::new(
        family.name(),
        family.grading(),
        fg.num_edges(),
        states,
        |s, t, _| per_edge_map(family, &infos, s, t),
    )
}

/// Builds and checks a complex: d² = 0 and degree-0 differentials.
pub fn build_complex(fg: &Fatgraph, family: Family, opts: &BuildOptions) -> Result<ChainComplex> {
    let c = build_cube(fg, family, opts)?.complex(0)?;
    c.check_d_squared()?;
    c.check_degree_zero()?;
    Ok(c)
}

/// The chromatic complex; `normalized` applies the height shift [−e(F)].
pub fn chromatic_complex(fg: &Fatgraph, normalized: bool) -> Result<ChainComplex> {
    let fg = fg.with_all_signs(Sign::Minus);
    let c = build_complex(&fg, Family::Chromatic, &BuildOptions::default())?;
    Ok(if normalized {
        c.shift(-(fg.num_edges() as i64), MultiDegree::ZERO)
    } else {
        c
    })
}

pub fn restricted_br_complex(fg: &Fatgraph) -> Result<ChainComplex> {
    build_complex(fg, Family::Restricted, &BuildOptions::default())
}

pub fn trigraded_br_complex(fg: &Fatgraph) -> Result<ChainComplex> {
    build_complex(fg, Family::Trigraded, &BuildOptions::default())
}

pub fn hat_trigraded_complex(fg: &Fatgraph) -> Result<ChainComplex> {
    build_complex(fg, Family::HatTrigraded, &BuildOptions::default())
}

pub fn khovanov_cube(fg: &Fatgraph) -> Result<ChainComplex> {
    build_complex(fg, Family::Khovanov, &BuildOptions::default())
}

/// A fatgraph over `g` with half-edges listed in increasing order at every vertex.
pub fn any_embedding(g: &AbstractGraph) -> Fatgraph {
    let mut rotations = vec![Vec::new(); g.n];
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        rotations[a].push(2 * i);
        rotations[b].push(2 * i + 1);
    }
    Fatgraph::new(rotations, vec![Sign::Minus; g.num_edges()])
        .expect("rotation lists cover every half-edge once")
}

pub fn hgr_complex(g: &AbstractGraph) -> Result<ChainComplex> {
    build_complex(&any_embedding(g), Family::Hgr, &BuildOptions::default())
}

pub fn b_complex(fg: &Fatgraph) -> Result<ChainComplex> {
    build_complex(fg, Family::B, &BuildOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    fn loop1() -> Fatgraph {
        Fatgraph::new(vec![vec![0, 1]], vec![Sign::Minus]).unwrap()
    }

    fn path() -> Fatgraph {
        Fatgraph::new(vec![vec![0], vec![1]], vec![Sign::Minus]).unwrap()
    }

    #[test]
    fn chromatic_shapes() {
        let c = chromatic_complex(&Fatgraph::empty(1), false).unwrap();
        assert_eq!(c.columns.len(), 1);
        assert_eq!(c.rank(0), 4);
        let c = chromatic_complex(&path(), false).unwrap();
        assert_eq!((c.rank(0), c.rank(1)), (8, 32));
        let d = c.differential(0);
        assert_eq!((d.nrows(), d.ncols()), (32, 8));
        let c = chromatic_complex(&loop1(), false).unwrap();
        assert_eq!((c.rank(0), c.rank(1)), (8, 8));
        let n = chromatic_complex(&path(), true).unwrap();
        assert_eq!((n.min_index(), n.max_index()), (-1, 0));
    }

    #[test]
    fn chain_euler_matches_polynomials() {
        let inter = Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap();
        for fg in [Fatgraph::empty(1), path(), loop1(), inter] {
            let z = crate::laurent::z_poly(&fg).unwrap();
            let c = chromatic_complex(&fg, true).unwrap();
            assert_eq!(c.chain_euler(), z);
            assert_eq!(
                restricted_br_complex(&fg).unwrap().chain_euler(),
                crate::laurent::restricted_br(&fg).unwrap()
            );
            assert_eq!(
                trigraded_br_complex(&fg).unwrap().chain_euler(),
                crate::laurent::r_prime_signed(&fg).unwrap()
            );
        }
        let b = LaurentPoly::balanced("q");
        assert_eq!(
            khovanov_cube(&path()).unwrap().chain_euler(),
            &b - &(&LaurentPoly::var("q") * &b.pow(2))
        );
    }

    #[test]
    fn positive_edge_starts_absent() {
        let pos = path().with_all_signs(Sign::Plus);
        let c = trigraded_br_complex(&pos).unwrap();
        assert_eq!(c.column(0)[0].state, 0);
        let cube = build_cube(&pos, Family::Trigraded, &BuildOptions::default()).unwrap();
        assert_eq!(cube.states[0].present, 0);
    }

    #[test]
    fn genus_zero_required() {
        let inter = Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap();
        assert_eq!(khovanov_cube(&inter), Err(Error::NonzeroGenus(1)));
        assert_eq!(b_complex(&inter), Err(Error::NonzeroGenus(1)));
    }

    #[test]
    fn generator_cap() {
        let opts = BuildOptions {
            max_generators: 10,
            ..BuildOptions::default()
        };
        assert!(matches!(
            build_complex(&path(), Family::Chromatic, &opts),
            Err(Error::TooManyGenerators { .. })
        ));
    }
}
