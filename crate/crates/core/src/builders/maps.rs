//! Chain maps between complexes: deletion–contraction, inclusion, augmentations.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{build_complex, BuildOptions, Family};
use crate::cube::{
    ChainComplex, Factor, FactorKind, GradedBasisWord, Grading, MultiDegree, SparseMatrix,
};
use crate::error::{Error, Result};
use crate::fatgraph::{BoundaryKey, Fatgraph, Sign};
use crate::homology::invariant_factors;

/// A family of matrices `C^i → D^{i + index_shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub label: String,
    pub index_shift: i64,
    /// Keyed by source index; missing entries are zero.
    pub matrices: BTreeMap<i64, SparseMatrix>,
}

/// A generator on which `d∘f` and `f∘d` disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationFailure {
    pub index: i64,
    pub state: u64,
    pub word: String,
}

impl ChainMap {
    pub fn matrix(&self, i: i64, src: &ChainComplex, tgt: &ChainComplex) -> SparseMatrix {
        self.matrices
            .get(&i)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(tgt.rank(i + self.index_shift), src.rank(i)))
    }

    /// Source generators where the square with the differentials fails to commute.
    pub fn commutation_failures(
        &self,
        src: &ChainComplex,
        tgt: &ChainComplex,
    ) -> Result<Vec<CommutationFailure>> {
        let mut out = Vec::new();
        let lo = src.min_index().min(tgt.min_index() - self.index_shift) - 1;
        let hi = src.max_index().max(tgt.max_index() - self.index_shift);
        for i in lo..=hi {
            if src.rank(i) == 0 {
                continue;
            }
            let a = tgt
                .differential(i + self.index_shift)
                .mul(&self.matrix(i, src, tgt))?;
            let b = self.matrix(i + 1, src, tgt).mul(&src.differential(i))?;
            let diff = a.add(&b.scale(-1))?;
            for (c, col) in diff.columns().iter().enumerate() {
                if !col.is_empty() {
                    let w = &src.column(i)[c];
                    out.push(CommutationFailure {
                        index: i,
                        state: w.state,
                        word: w.word_string(),
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn check_commutes(&self, src: &ChainComplex, tgt: &ChainComplex) -> Result<()> {
        match self.commutation_failures(src, tgt)?.first() {
            None => Ok(()),
            Some(f) => Err(Error::NotAComplex {
                index: f.index,
                detail: format!(
                    "{} does not commute with d at generator [{}] of state {:#b}",
                    self.label, f.word, f.state
                ),
            }),
        }
    }

    /// The common degree shift of every nonzero entry, if there is one. Requires equal gradings.
    pub fn degree_shift(&self, src: &ChainComplex, tgt: &ChainComplex) -> Option<MultiDegree> {
        let mut shift = None;
        for (&i, m) in &self.matrices {
            for (r, c, _) in m.triplets() {
                let d = tgt.column(i + self.index_shift)[r].degree - src.column(i)[c].degree;
                if *shift.get_or_insert(d) != d {
                    return None;
                }
            }
        }
        shift
    }
}

fn word_index(c: &ChainComplex, i: i64) -> HashMap<(u64, &[Factor]), usize> {
    c.column(i)
        .iter()
        .enumerate()
        .map(|(k, w)| ((w.state, w.word.as_slice()), k))
        .collect()
}

/// Builds the matrix of a map given the image of each source generator as (state, word, coefficient).
fn assemble(
    src: &ChainComplex,
    tgt: &ChainComplex,
    index_shift: i64,
    label: &str,
    mut image: impl FnMut(i64, &GradedBasisWord) -> Result<Vec<(u64, Vec<Factor>, i64)>>,
) -> Result<ChainMap> {
    let mut matrices = BTreeMap::new();
    for i in src.indices() {
        let lookup = word_index(tgt, i + index_shift);
        let mut cols = Vec::with_capacity(src.rank(i));
        for w in src.column(i) {
            let mut col = Vec::new();
            for (state, word, c) in image(i, w)? {
                let r = lookup.get(&(state, word.as_slice())).ok_or_else(|| {
                    Error::Internal(format!(
                        "{label}: no generator [{:?}] of state {state:#b} in the target",
                        word
                    ))
                })?;
                col.push((*r, c));
            }
            cols.push(col);
        }
        matrices.insert(
            i,
            SparseMatrix::from_columns(tgt.rank(i + index_shift), cols)?,
        );
    }
    Ok(ChainMap {
        label: label.to_string(),
        index_shift,
        matrices,
    })
}

/// The complex with one column holding the basis of a single factor, shifted by `shift`.
pub fn factor_complex(kind: FactorKind, shift: MultiDegree, grading: Grading) -> ChainComplex {
    let column = kind
        .basis()
        .iter()
        .map(|&f| GradedBasisWord {
            state: 0,
            word: vec![f],
            degree: grading.project(f.degree() + shift),
        })
        .collect();
    ChainComplex {
        label: format!("{kind:?}"),
        grading,
        offset: 0,
        columns: vec![column],
        differentials: Vec::new(),
    }
}

/// The pieces of the deletion–contraction sequence
/// `0 → C^{i−1}(F−e)⊗R{1} → C^i(F) → C^i(F/e)⊗V → 0` for one edge, in unnormalized indices.
/// `e` is relabeled last in `whole`.
#[derive(Clone, Debug)]
pub struct DeletionContraction {
    pub family: Family,
    pub whole: ChainComplex,
    /// C(F−e)⊗R{1} (chromatic) or C(F−e){1} (restricted).
    pub deleted: ChainComplex,
    /// C(F/e)⊗V.
    pub contracted: ChainComplex,
    pub eta: ChainMap,
    pub nu: ChainMap,
}

/// Φ: the extra coefficient factor `b` placed in front of `rest`, except that
/// x₋₂ ⊗ x₀^h goes to the sum of all words with a single x₋₂.
fn phi(b: Factor, rest: &[Factor]) -> Vec<Vec<Factor>> {
    if b == Factor::XMinus2 && rest.iter().all(|&f| f == Factor::X0) {
        (0..=rest.len())
            .map(|pos| {
                (0..=rest.len())
                    .map(|i| {
                        if i == pos {
                            Factor::XMinus2
                        } else {
                            Factor::X0
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        vec![std::iter::once(b).chain(rest.iter().copied()).collect()]
    }
}

/// Sends boundary circles of a state of F containing the last edge to those of the same
/// state in F/e.
fn contracted_key(key: BoundaryKey, last: usize, merged: usize, map: &[usize]) -> BoundaryKey {
    match key {
        BoundaryKey::Orbit(m) => {
            let rest = m & !(0b11u128 << (2 * last));
            if rest == 0 {
                BoundaryKey::Island(merged)
            } else {
                BoundaryKey::Orbit(rest)
            }
        }
        BoundaryKey::Island(w) => BoundaryKey::Island(map[w]),
    }
}

/// Deletion–contraction maps η and ν for the non-loop edge `e`.
pub fn deletion_contraction(
    fg: &Fatgraph,
    e: usize,
    family: Family,
) -> Result<DeletionContraction> {
    if !matches!(family, Family::Chromatic | Family::Restricted) {
        return Err(Error::Internal(format!(
            "no deletion–contraction sequence for the {} family",
            family.name()
        )));
    }
    if e >= fg.num_edges() {
        return Err(Error::UnknownEdge(e));
    }
    if fg.is_loop(e) {
        return Err(Error::LoopContraction(e));
    }
    let opts = BuildOptions::default();
    let f = fg.move_edge_last(e)?.with_all_signs(Sign::Minus);
    let last = f.num_edges() - 1;
    let minus = f.delete_edge(last)?;
    let (quot, map) = f.contract_edge_with_map(last)?;
    let whole = build_complex(&f, family, &opts)?;
    let grading = family.grading();
    let small = build_complex(&minus, family, &opts)?;
    let deleted = match family {
        Family::Chromatic => {
            small.tensor(&factor_complex(FactorKind::R, MultiDegree::q(1), grading))?
        }
        _ => small.shift(0, MultiDegree::q(1)),
    };
    let contracted = build_complex(&quot, family, &opts)?.tensor(&factor_complex(
        FactorKind::V,
        MultiDegree::ZERO,
        grading,
    ))?;
    let top = 1u64 << last;

    let eta = assemble(&deleted, &whole, 1, "η", |_, w| {
        let state = w.state | top;
        Ok(match family {
            Family::Chromatic => {
                let (b, word) = w
                    .word
                    .split_last()
                    .expect("tensor word ends with the R factor");
                let coeff_start = word
                    .iter()
                    .position(|f| f.kind() == FactorKind::R)
                    .unwrap_or(word.len());
                phi(*b, &word[coeff_start..])
                    .into_iter()
                    .map(|tail| {
                        (
                            state,
                            word[..coeff_start].iter().copied().chain(tail).collect(),
                            1,
                        )
                    })
                    .collect()
            }
            _ => vec![(state, w.word.clone(), 1)],
        })
    })?;

    let (u, v) = f.endpoints(last);
    let nv = f.num_vertices();
    let full = f.full_mask();
    let nu = assemble(&whole, &contracted, 0, "ν", |_, w| {
        if w.state & top != 0 {
            return Ok(Vec::new());
        }
        let present = w.state ^ full;
        let src_keys = f.boundary(present);
        let tgt_keys = quot.boundary(present & !top);
        let mut word = Vec::with_capacity(w.word.len());
        for t in 0..nv - 1 {
            let from = if t == map[u] {
                v
            } else {
                (0..nv)
                    .find(|&x| x != v && map[x] == t)
                    .expect("contraction map is onto")
            };
            word.push(w.word[from]);
        }
        for key in &tgt_keys {
            let s = src_keys
                .iter()
                .position(|k| contracted_key(*k, last, map[u], &map) == *key)
                .ok_or_else(|| {
                    Error::Internal(format!("ν: boundary circle {key:?} has no preimage"))
                })?;
            word.push(w.word[nv + s]);
        }
        word.extend_from_slice(&w.word[nv + src_keys.len()..]);
        word.push(w.word[u]);
        Ok(vec![(w.state, word, 1)])
    })?;
    Ok(DeletionContraction {
        family,
        whole,
        deleted,
        contracted,
        eta,
        nu,
    })
}

pub fn eta_chain_map(fg: &Fatgraph, e: usize) -> Result<ChainMap> {
    Ok(deletion_contraction(fg, e, Family::Chromatic)?.eta)
}

pub fn nu_chain_map(fg: &Fatgraph, e: usize) -> Result<ChainMap> {
    Ok(deletion_contraction(fg, e, Family::Chromatic)?.nu)
}

/// Where exactness of a deletion–contraction sequence fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    pub index: i64,
    pub detail: String,
}

impl DeletionContraction {
    /// Chain-map and exactness checks at every index of the middle complex.
    pub fn failures(&self) -> Result<Vec<ExactnessFailure>> {
        let mut out = Vec::new();
        let mut fail = |index: i64, detail: String| out.push(ExactnessFailure { index, detail });
        for (name, m, s, t) in [
            ("η", &self.eta, &self.deleted, &self.whole),
            ("ν", &self.nu, &self.whole, &self.contracted),
        ] {
            for c in m.commutation_failures(s, t)? {
                fail(
                    c.index,
                    format!(
                        "{name} does not commute with d at [{}] of state {:#b}",
                        c.word, c.state
                    ),
                );
            }
        }
        for i in self.whole.indices() {
            let eta = self.eta.matrix(i - 1, &self.deleted, &self.whole);
            let nu = self.nu.matrix(i, &self.whole, &self.contracted);
            let fe = invariant_factors(&eta)?;
            let fn_ = invariant_factors(&nu)?;
            if fe.rank != eta.ncols() {
                fail(
                    i,
                    format!("η has rank {} on a source of rank {}", fe.rank, eta.ncols()),
                );
            }
            if fn_.rank != nu.nrows() || !fn_.torsion.is_empty() {
                fail(
                    i,
                    format!(
                        "ν is not onto: rank {} of {}, torsion {:?}",
                        fn_.rank,
                        nu.nrows(),
                        fn_.torsion
                    ),
                );
            }
            if !nu.mul(&eta)?.is_zero() {
                fail(i, "ν∘η ≠ 0".into());
            }
            if fe.rank + fn_.rank != self.whole.rank(i) || !fe.torsion.is_empty() {
                fail(
                    i,
                    format!(
                        "im η ≠ ker ν: ranks {} + {} against {}, torsion {:?}",
                        fe.rank,
                        fn_.rank,
                        self.whole.rank(i),
                        fe.torsion
                    ),
                );
            }
        }
        Ok(out)
    }
}

/// How a subfatgraph sits inside a larger one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatgraphEmbedding {
    /// Image of each vertex of the subfatgraph.
    pub vertices: Vec<usize>,
    /// Image of each edge of the subfatgraph.
    pub edges: Vec<usize>,
}

impl FatgraphEmbedding {
    pub fn identity(fg: &Fatgraph) -> Self {
        FatgraphEmbedding {
            vertices: (0..fg.num_vertices()).collect(),
            edges: (0..fg.num_edges()).collect(),
        }
    }

    /// Image of every half-edge, or an error if this is not an embedding of fatgraphs.
    pub fn half_edge_map(&self, sub: &Fatgraph, sup: &Fatgraph) -> Result<Vec<usize>> {
        let bad = |s: String| Err(Error::InvalidEmbedding(s));
        if self.vertices.len() != sub.num_vertices() || self.edges.len() != sub.num_edges() {
            return bad("map sizes differ from the subfatgraph".into());
        }
        let injective = |xs: &[usize], n: usize| {
            let mut seen = vec![false; n];
            xs.iter()
                .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        if !injective(&self.vertices, sup.num_vertices())
            || !injective(&self.edges, sup.num_edges())
        {
            return bad("vertex or edge map is not injective into the fatgraph".into());
        }
        let mut halves = vec![0; 2 * sub.num_edges()];
        let mut loops = Vec::new();
        for (i, &m) in self.edges.iter().enumerate() {
            let (a, b) = sub.endpoints(i);
            let (c, d) = sup.endpoints(m);
            let (a, b) = (self.vertices[a], self.vertices[b]);
            if (a, b) == (c, d) {
                halves[2 * i] = 2 * m;
                halves[2 * i + 1] = 2 * m + 1;
                if a == b {
                    loops.push(i);
                }
            } else if (a, b) == (d, c) {
                halves[2 * i] = 2 * m + 1;
                halves[2 * i + 1] = 2 * m;
            } else {
                return bad(format!(
                    "edge {i} goes to edge {m} with different endpoints"
                ));
            }
        }
        for flips in 0u64..1 << loops.len() {
            let mut h = halves.clone();
            for (k, &i) in loops.iter().enumerate() {
                if flips >> k & 1 == 1 {
                    h.swap(2 * i, 2 * i + 1);
                }
            }
            if self.rotations_agree(sub, sup, &h) {
                return Ok(h);
            }
        }
        bad("cyclic orders at some vertex differ".into())
    }

    fn rotations_agree(&self, sub: &Fatgraph, sup: &Fatgraph, halves: &[usize]) -> bool {
        let mut image = vec![false; 2 * sup.num_edges()];
        for &h in halves {
            image[h] = true;
        }
        (0..sub.num_vertices()).all(|a| {
            let mapped: Vec<usize> = sub.rotation(a).iter().map(|&h| halves[h]).collect();
            let restricted: Vec<usize> = sup
                .rotation(self.vertices[a])
                .iter()
                .copied()
                .filter(|&h| image[h])
                .collect();
            mapped.len() == restricted.len()
                && (mapped.is_empty()
                    || (0..mapped.len()).any(|s| {
                        restricted
                            .iter()
                            .cycle()
                            .skip(s)
                            .take(mapped.len())
                            .eq(mapped.iter())
                    }))
        })
    }
}

/// The inclusion of chromatic complexes C̃(sub) → C̃(sup): absent extra edges, extra vertices
/// as islands carrying v₊, and x₀ in the extra coefficient slots. Signs are gauged so the map commutes.
pub fn inclusion_chain_map(
    sub: &Fatgraph,
    sup: &Fatgraph,
    emb: &FatgraphEmbedding,
) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
    let halves = emb.half_edge_map(sub, sup)?;
    let sub = sub.with_all_signs(Sign::Minus);
    let sup = sup.with_all_signs(Sign::Minus);
    let src = build_complex(&sub, Family::Chromatic, &BuildOptions::default())?;
    let tgt = build_complex(&sup, Family::Chromatic, &BuildOptions::default())?;
    let extra = sup.num_edges() - sub.num_edges();
    let mapped_edges: u64 = emb.edges.iter().map(|&m| 1u64 << m).sum();
    let extra_mask = sup.full_mask() & !mapped_edges;
    let lift = |alpha: u64| -> u64 {
        emb.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| alpha >> i & 1 == 1)
            .map(|(_, &m)| 1u64 << m)
            .sum::<u64>()
            | extra_mask
    };
    let map_key = |k: BoundaryKey| match k {
        BoundaryKey::Orbit(m) => BoundaryKey::Orbit(
            (0..128)
                .filter(|h| m >> h & 1 == 1)
                .map(|h| 1u128 << halves[h])
                .sum(),
        ),
        BoundaryKey::Island(a) => BoundaryKey::Island(emb.vertices[a]),
    };

    // ε(α) with ε(α + e_j) = ε(α)·sign_sub(α, j)·sign_sup(lift α, m_j).
    let mut gauge = vec![1i64; 1 << sub.num_edges()];
    for alpha in 1..gauge.len() as u64 {
        let j = alpha.trailing_zeros() as usize;
        let parent = alpha ^ 1 << j;
        gauge[alpha as usize] = gauge[parent as usize]
            * crate::cube::cube_sign(parent, j)?
            * crate::cube::cube_sign(lift(parent), emb.edges[j])?;
    }

    let nv_sub = sub.num_vertices();
    let sub_full = sub.full_mask();
    let sup_full = sup.full_mask();
    let map = assemble(&src, &tgt, extra as i64, "inclusion", |_, w| {
        let alpha = lift(w.state);
        let sub_keys = sub.boundary(w.state ^ sub_full);
        let sup_keys = sup.boundary(alpha ^ sup_full);
        let mut word = vec![Factor::VPlus; sup.num_vertices()];
        for a in 0..nv_sub {
            word[emb.vertices[a]] = w.word[a];
        }
        for key in &sup_keys {
            word.push(match sub_keys.iter().position(|k| map_key(*k) == *key) {
                Some(s) => w.word[nv_sub + s],
                None => Factor::VPlus,
            });
        }
        let rest = &w.word[nv_sub + sub_keys.len()..];
        let coeff_start = rest
            .iter()
            .position(|f| f.kind() == FactorKind::R)
            .unwrap_or(rest.len());
        word.extend_from_slice(&rest[..coeff_start]);
        word.extend(std::iter::repeat_n(Factor::X0, extra));
        word.extend_from_slice(&rest[coeff_start..]);
        Ok(vec![(alpha, word, gauge[w.state as usize])])
    })?;
    Ok((src, tgt, map))
}

/// E(F) → D(F): m₀ ↦ 1, m₁ ↦ 0 on every component factor. D(F) is the edge-addition
/// complex V^{p} {e(H)}.
pub fn augmentation_f(fg: &Fatgraph) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
    let opts = BuildOptions::default();
    let e = build_complex(fg, Family::B, &opts)?;
    let d = build_complex(&fg.with_all_signs(Sign::Plus), Family::Khovanov, &opts)?;
    let map = assemble(&e, &d, 0, "f", |_, w| {
        let k = w
            .word
            .iter()
            .take_while(|f| f.kind() == FactorKind::M)
            .count();
        Ok(if w.word[..k].iter().all(|&f| f == Factor::M0) {
            vec![(w.state, w.word[k..].to_vec(), 1)]
        } else {
            Vec::new()
        })
    })?;
    Ok((e, d, map))
}

/// E(F) → C(F), the Helme-Guizon–Rong complex, sending each V factor to `v_plus` or `v_minus`.
pub fn augmentation_g(
    fg: &Fatgraph,
    v_plus: i64,
    v_minus: i64,
) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
    let opts = BuildOptions::default();
    let e = build_complex(fg, Family::B, &opts)?;
    let c = build_complex(fg, Family::Hgr, &opts)?;
    let map = assemble(&e, &c, 0, "g", |_, w| {
        let k = w
            .word
            .iter()
            .take_while(|f| f.kind() == FactorKind::M)
            .count();
        let coeff = w.word[k..].iter().try_fold(1i64, |acc, &f| {
            acc.checked_mul(if f == Factor::VPlus { v_plus } else { v_minus })
        });
        let coeff = coeff
            .ok_or_else(|| Error::Internal("augmentation coefficient overflowed i64".into()))?;
        Ok(if coeff == 0 {
            Vec::new()
        } else {
            vec![(w.state, w.word[..k].to_vec(), coeff)]
        })
    })?;
    Ok((e, c, map))
}

/// Generators of E(F) where the augmentation (v₊ ↦ `v_plus`, v₋ ↦ `v_minus`) fails to commute with d.
pub fn test_chain_map(fg: &Fatgraph, v_plus: i64, v_minus: i64) -> Result<Vec<CommutationFailure>> {
    let (e, c, g) = augmentation_g(fg, v_plus, v_minus)?;
    g.commutation_failures(&e, &c)
}
