//! Multigraded state modules, the per-edge algebra maps, cube signs and chain complexes.

mod matrix;

pub use matrix::SparseMatrix;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Degree in up to three gradings; unused trailing slots stay 0.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct MultiDegree(pub [i32; 3]);

impl MultiDegree {
    pub const ZERO: MultiDegree = MultiDegree([0, 0, 0]);

    pub fn q(a: i32) -> Self {
        MultiDegree([a, 0, 0])
    }

    pub fn total(self) -> i32 {
        self.0.iter().sum()
    }
}

impl Add for MultiDegree {
    type Output = MultiDegree;
    fn add(self, o: MultiDegree) -> MultiDegree {
        MultiDegree([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for MultiDegree {
    type Output = MultiDegree;
    fn sub(self, o: MultiDegree) -> MultiDegree {
        self + -o
    }
}

impl Neg for MultiDegree {
    type Output = MultiDegree;
    fn neg(self) -> MultiDegree {
        MultiDegree([-self.0[0], -self.0[1], -self.0[2]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    V,
    U,
    R,
    M,
}

impl FactorKind {
    /// Basis symbols; a set bit in a word index selects the second.
    pub fn basis(self) -> [Factor; 2] {
        match self {
            FactorKind::V => [Factor::VMinus, Factor::VPlus],
            FactorKind::U => [Factor::UMinus, Factor::UPlus],
            FactorKind::R => [Factor::XMinus2, Factor::X0],
            FactorKind::M => [Factor::M0, Factor::M1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    VPlus,
    VMinus,
    UPlus,
    UMinus,
    X0,
    XMinus2,
    M0,
    M1,
}

impl Factor {
    pub fn kind(self) -> FactorKind {
        match self {
            Factor::VPlus | Factor::VMinus => FactorKind::V,
            Factor::UPlus | Factor::UMinus => FactorKind::U,
            Factor::X0 | Factor::XMinus2 => FactorKind::R,
            Factor::M0 | Factor::M1 => FactorKind::M,
        }
    }

    pub fn degree(self) -> MultiDegree {
        match self {
            Factor::VPlus => MultiDegree([1, 0, 0]),
            Factor::VMinus => MultiDegree([-1, 0, 0]),
            Factor::UPlus => MultiDegree([0, 1, 0]),
            Factor::UMinus => MultiDegree([0, -1, 0]),
            Factor::X0 => MultiDegree([0, 0, 0]),
            Factor::XMinus2 => MultiDegree([0, 0, -2]),
            Factor::M0 => MultiDegree([0, 0, 0]),
            Factor::M1 => MultiDegree([0, 1, 0]),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Factor::VPlus => "v+",
            Factor::VMinus => "v-",
            Factor::UPlus => "u+",
            Factor::UMinus => "u-",
            Factor::X0 => "x0",
            Factor::XMinus2 => "x-2",
            Factor::M0 => "m0",
            Factor::M1 => "m1",
        }
    }

    fn is_plus(self) -> bool {
        matches!(self, Factor::VPlus | Factor::UPlus)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How intrinsic degrees are read off in a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    /// Total degree, variable `q`.
    Q,
    /// Total degree, variable `r`.
    R,
    /// (q, r).
    QR,
    /// (q, r, s).
    QRS,
}

impl Grading {
    pub fn arity(self) -> usize {
        match self {
            Grading::Q | Grading::R => 1,
            Grading::QR => 2,
            Grading::QRS => 3,
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Grading::Q => &["q"],
            Grading::R => &["r"],
            Grading::QR => &["q", "r"],
            Grading::QRS => &["q", "r", "s"],
        }
    }

    pub fn project(self, d: MultiDegree) -> MultiDegree {
        match self {
            Grading::Q | Grading::R => MultiDegree([d.total(), 0, 0]),
            Grading::QR => MultiDegree([d.0[0] + d.0[2], d.0[1], 0]),
            Grading::QRS => d,
        }
    }

    pub fn monomial(self, d: MultiDegree, coeff: impl Into<BigInt>) -> LaurentPoly {
        let a = self.arity();
        LaurentPoly::monomial(self.vars(), &d.0[..a], coeff)
    }
}

/// m̃: v₊v₊ ↦ v₊, v₊v₋ ↦ v₋, v₋v₊ ↦ v₋, v₋v₋ ↦ 0.
pub fn frobenius_mul(a: Factor, b: Factor) -> Result<Option<Factor>> {
    use Factor::*;
    match (a, b) {
        (VPlus, VPlus) => Ok(Some(VPlus)),
        (VPlus, VMinus) | (VMinus, VPlus) => Ok(Some(VMinus)),
        (VMinus, VMinus) => Ok(None),
        _ => Err(Error::FactorMismatch(format!(
            "m̃ needs two V factors, got {a} and {b}"
        ))),
    }
}

/// △̃: v₊ ↦ v₊v₋ + v₋v₊, v₋ ↦ v₋v₋.
pub fn frobenius_comul(a: Factor) -> Result<Vec<(Factor, Factor)>> {
    use Factor::*;
    match a {
        VPlus => Ok(vec![(VPlus, VMinus), (VMinus, VPlus)]),
        VMinus => Ok(vec![(VMinus, VMinus)]),
        _ => Err(Error::FactorMismatch(format!(
            "△̃ needs a V factor, got {a}"
        ))),
    }
}

/// Multiplication on M = ℤ[m]/(m²) with m₀ the unit.
pub fn component_mul(a: Factor, b: Factor) -> Result<Option<Factor>> {
    use Factor::*;
    match (a, b) {
        (M0, M0) => Ok(Some(M0)),
        (M0, M1) | (M1, M0) => Ok(Some(M1)),
        (M1, M1) => Ok(None),
        _ => Err(Error::FactorMismatch(format!(
            "component product needs two M factors, got {a} and {b}"
        ))),
    }
}

/// Genus map from `word` (all of kind `kind`) to words of length `target_len`:
/// the sum of every target word with the same degree. Equal lengths give the identity.
pub fn genus_map(word: &[Factor], kind: FactorKind, target_len: usize) -> Result<Vec<Vec<Factor>>> {
    if !matches!(kind, FactorKind::V | FactorKind::U) || word.iter().any(|f| f.kind() != kind) {
        return Err(Error::FactorMismatch(format!(
            "genus map on {word:?} as {kind:?}"
        )));
    }
    let len = word.len();
    if target_len == len {
        return Ok(vec![word.to_vec()]);
    }
    if target_len + 2 != len && target_len != len + 2 {
        return Err(Error::FactorMismatch(format!(
            "genus map from {len} to {target_len} factors"
        )));
    }
    let d: i64 = word.iter().map(|f| if f.is_plus() { 1 } else { -1 }).sum();
    let l = target_len as i64;
    if (l + d) % 2 != 0 || d.abs() > l {
        return Ok(Vec::new());
    }
    let plus = ((l + d) / 2) as u32;
    let [minus_f, plus_f] = kind.basis();
    Ok((0u64..1 << target_len)
        .rev()
        .filter(|m| m.count_ones() == plus)
        .map(|m| {
            (0..target_len)
                .map(|i| {
                    if m >> (target_len - 1 - i) & 1 == 1 {
                        plus_f
                    } else {
                        minus_f
                    }
                })
                .collect()
        })
        .collect())
}

/// m̂_g: lowering by one genus.
pub fn genus_lower(word: &[Factor], kind: FactorKind) -> Result<Vec<Vec<Factor>>> {
    if word.len() < 2 {
        return Err(Error::FactorMismatch(
            "cannot lower genus from g = 0".into(),
        ));
    }
    genus_map(word, kind, word.len() - 2)
}

/// △̄_h: appends x₀ to the empty word, otherwise splits the last factor.
pub fn r_comul(word: &[Factor]) -> Result<Vec<Vec<Factor>>> {
    if let Some(f) = word.iter().find(|f| f.kind() != FactorKind::R) {
        return Err(Error::FactorMismatch(format!("△̄ on non-R factor {f}")));
    }
    let Some((&last, init)) = word.split_last() else {
        return Ok(vec![vec![Factor::X0]]);
    };
    let tails: &[[Factor; 2]] = match last {
        Factor::X0 => &[[Factor::X0, Factor::X0]],
        _ => &[[Factor::XMinus2, Factor::X0], [Factor::X0, Factor::XMinus2]],
    };
    Ok(tails
        .iter()
        .map(|t| init.iter().copied().chain(t.iter().copied()).collect())
        .collect())
}

/// (−1)^{Σ_{i<j} α_i} for the cube edge leaving `alpha` along `j`.
pub fn cube_sign(alpha: u64, j: usize) -> Result<i64> {
    if alpha >> j & 1 == 1 {
        return Err(Error::CoordinateSet(j));
    }
    Ok(
        if (alpha & ((1u64 << j) - 1)).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        },
    )
}

/// Factor blocks of a state module, in word order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub components: usize,
    pub vertices: usize,
    pub boundary: usize,
    pub genus: usize,
    pub genus_kind: FactorKind,
    pub coeffs: usize,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.components + self.vertices + self.boundary + self.genus + self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size(&self) -> usize {
        1 << self.len()
    }

    pub fn kinds(&self) -> Vec<FactorKind> {
        let mut k = vec![FactorKind::M; self.components];
        k.extend(std::iter::repeat_n(
            FactorKind::V,
            self.vertices + self.boundary,
        ));
        k.extend(std::iter::repeat_n(self.genus_kind, self.genus));
        k.extend(std::iter::repeat_n(FactorKind::R, self.coeffs));
        k
    }

    pub fn component_range(&self) -> std::ops::Range<usize> {
        0..self.components
    }

    pub fn vertex_range(&self) -> std::ops::Range<usize> {
        let s = self.components;
        s..s + self.vertices
    }

    pub fn boundary_range(&self) -> std::ops::Range<usize> {
        let s = self.components + self.vertices;
        s..s + self.boundary
    }

    pub fn genus_range(&self) -> std::ops::Range<usize> {
        let s = self.components + self.vertices + self.boundary;
        s..s + self.genus
    }

    pub fn coeff_range(&self) -> std::ops::Range<usize> {
        let s = self.len() - self.coeffs;
        s..self.len()
    }

    pub fn decode(&self, index: usize) -> Vec<Factor> {
        let n = self.len();
        self.kinds()
            .into_iter()
            .enumerate()
            .map(|(i, k)| k.basis()[index >> (n - 1 - i) & 1])
            .collect()
    }

    pub fn encode(&self, word: &[Factor]) -> Result<usize> {
        let kinds = self.kinds();
        if word.len() != kinds.len() {
            return Err(Error::FactorMismatch(format!(
                "word of length {} for layout of length {}",
                word.len(),
                kinds.len()
            )));
        }
        let mut idx = 0;
        for (f, k) in word.iter().zip(kinds) {
            let [lo, hi] = k.basis();
            let bit = if *f == hi {
                1
            } else if *f == lo {
                0
            } else {
                return Err(Error::FactorMismatch(format!("{f} in a {k:?} slot")));
            };
            idx = idx << 1 | bit;
        }
        Ok(idx)
    }

    pub fn degree(&self, index: usize) -> MultiDegree {
        self.decode(index)
            .into_iter()
            .fold(MultiDegree::ZERO, |d, f| d + f.degree())
    }
}

/// One vertex of the cube: a state with its module.
#[derive(Clone, Debug)]
pub struct CubeState {
    pub alpha: u64,
    pub present: u64,
    pub layout: Layout,
    /// Intrinsic degree shift applied to every generator.
    pub shift: MultiDegree,
}

/// A cube of resolutions with unsigned per-edge maps.
#[derive(Clone, Debug)]
pub struct Cube {
    pub label: String,
    pub grading: Grading,
    pub dim: usize,
    pub states: Vec<CubeState>,
    maps: HashMap<(u64, usize), SparseMatrix>,
}

/// Sums of words with coefficients, the output of a per-edge map on one generator.
pub type WordSum = Vec<(Vec<Factor>, i64)>;

/// Expands a product of per-block sums into a sum of concatenated words.
pub fn concat_blocks(blocks: &[WordSum]) -> WordSum {
    let mut acc: WordSum = vec![(Vec::new(), 1)];
    for block in blocks {
        let mut next = Vec::with_capacity(acc.len() * block.len());
        for (w, c) in &acc {
            for (b, d) in block {
                let mut word = w.clone();
                word.extend_from_slice(b);
                next.push((word, c * d));
            }
        }
        acc = next;
    }
    acc
}

impl Cube {
    /// Builds every per-edge map. `edge_map(src, tgt, j)` returns the image of each
    /// source generator.
    pub fn new(
        label: impl Into<String>,
        grading: Grading,
        dim: usize,
        states: Vec<CubeState>,
        mut edge_map: impl FnMut(&CubeState, &CubeState, usize) -> Result<Vec<WordSum>>,
    ) -> Result<Cube> {
        if states.len() != 1 << dim || states.iter().enumerate().any(|(i, s)| s.alpha != i as u64) {
            return Err(Error::Internal(
                "cube states must be indexed by cube coordinate".into(),
            ));
        }
        let mut maps = HashMap::new();
        for src in &states {
            for j in 0..dim {
                if src.alpha >> j & 1 == 1 {
                    continue;
                }
                let tgt = &states[(src.alpha | 1 << j) as usize];
                let images = edge_map(src, tgt, j)?;
                if images.len() != src.layout.size() {
                    return Err(Error::Internal(format!(
                        "edge map along {j} gave {} images for {} generators",
                        images.len(),
                        src.layout.size()
                    )));
                }
                let cols = images
                    .into_iter()
                    .map(|sum| {
                        sum.into_iter()
                            .map(|(w, c)| tgt.layout.encode(&w).map(|r| (r, c)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                maps.insert(
                    (src.alpha, j),
                    SparseMatrix::from_columns(tgt.layout.size(), cols)?,
                );
            }
        }
        Ok(Cube {
            label: label.into(),
            grading,
            dim,
            states,
            maps,
        })
    }

    /// Unsigned map along coordinate `j` out of `alpha`.
    pub fn edge_map(&self, alpha: u64, j: usize) -> Option<&SparseMatrix> {
        self.maps.get(&(alpha, j))
    }

    pub fn generator_count(&self) -> usize {
        self.states.iter().map(|s| s.layout.size()).sum()
    }

    /// Checks that every 2-face anti-commutes once cube signs are applied.
    pub fn check_faces(&self) -> Result<()> {
        for s in &self.states {
            let a = s.alpha;
            for j in 0..self.dim {
                for k in j + 1..self.dim {
                    if a >> j & 1 == 1 || a >> k & 1 == 1 {
                        continue;
                    }
                    let (aj, ak) = (a | 1 << j, a | 1 << k);
                    let via_j = self.maps[&(aj, k)]
                        .mul(&self.maps[&(a, j)])?
                        .scale(cube_sign(a, j)? * cube_sign(aj, k)?);
                    let via_k = self.maps[&(ak, j)]
                        .mul(&self.maps[&(a, k)])?
                        .scale(cube_sign(a, k)? * cube_sign(ak, j)?);
                    if !via_j.add(&via_k)?.is_zero() {
                        return Err(Error::NotAComplex {
                            index: a.count_ones() as i64,
                            detail: format!("{}: face at state {a:#b} along edges {j},{k} does not anti-commute", self.label),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Assembles the total complex; column `h` collects states of height `h` in increasing coordinate order.
    pub fn complex(&self, offset: i64) -> Result<ChainComplex> {
        let mut by_height: Vec<Vec<u64>> = vec![Vec::new(); self.dim + 1];
        for s in &self.states {
            by_height[s.alpha.count_ones() as usize].push(s.alpha);
        }
        let mut base = vec![0usize; self.states.len()];
        let mut columns = Vec::new();
        for alphas in &by_height {
            let mut col = Vec::new();
            for &a in alphas {
                let st = &self.states[a as usize];
                base[a as usize] = col.len();
                for idx in 0..st.layout.size() {
                    let word = st.layout.decode(idx);
                    let degree = self.grading.project(st.layout.degree(idx) + st.shift);
                    col.push(GradedBasisWord {
                        state: a,
                        word,
                        degree,
                    });
                }
            }
            columns.push(col);
        }
        let mut differentials = Vec::new();
        for h in 0..self.dim {
            let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); columns[h].len()];
            for &a in &by_height[h] {
                for j in 0..self.dim {
                    if a >> j & 1 == 1 {
                        continue;
                    }
                    let sign = cube_sign(a, j)?;
                    let b = a | 1 << j;
                    for (src, col) in self.maps[&(a, j)].columns().iter().enumerate() {
                        for &(r, v) in col {
                            cols[base[a as usize] + src].push((base[b as usize] + r, sign * v));
                        }
                    }
                }
            }
            differentials.push(SparseMatrix::from_columns(columns[h + 1].len(), cols)?);
        }
        Ok(ChainComplex {
            label: self.label.clone(),
            grading: self.grading,
            offset,
            columns,
            differentials,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedBasisWord {
    /// Cube coordinate of the owning state.
    pub state: u64,
    pub word: Vec<Factor>,
    /// Projected degree including shifts.
    pub degree: MultiDegree,
}

impl GradedBasisWord {
    pub fn word_string(&self) -> String {
        self.word
            .iter()
            .map(|f| f.symbol())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Cochain complex with `columns[i]` in cohomological index `offset + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub label: String,
    pub grading: Grading,
    pub offset: i64,
    pub columns: Vec<Vec<GradedBasisWord>>,
    /// `differentials[i]` maps `columns[i]` to `columns[i+1]`.
    pub differentials: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn min_index(&self) -> i64 {
        self.offset
    }

    pub fn max_index(&self) -> i64 {
        self.offset + self.columns.len() as i64 - 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.min_index()..=self.max_index()
    }

    pub fn column(&self, i: i64) -> &[GradedBasisWord] {
        let k = i - self.offset;
        if k < 0 || k as usize >= self.columns.len() {
            &[]
        } else {
            &self.columns[k as usize]
        }
    }

    pub fn rank(&self, i: i64) -> usize {
        self.column(i).len()
    }

    /// d^i : C^i → C^{i+1}, zero outside the stored range.
    pub fn differential(&self, i: i64) -> SparseMatrix {
        let k = i - self.offset;
        if k >= 0 && (k as usize) < self.differentials.len() {
            self.differentials[k as usize].clone()
        } else {
            SparseMatrix::zeros(self.rank(i + 1), self.rank(i))
        }
    }

    pub fn generator_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Graded dimension of C^i.
    pub fn qdim(&self, i: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        let mut counts: HashMap<MultiDegree, i64> = HashMap::new();
        for w in self.column(i) {
            *counts.entry(w.degree).or_default() += 1;
        }
        for (d, c) in counts {
            p += &self.grading.monomial(d, c);
        }
        p
    }

    /// Σ (−1)^i qdim(C^i).
    pub fn chain_euler(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for i in self.indices() {
            let q = self.qdim(i);
            p += &(if i.rem_euclid(2) == 0 { q } else { -q });
        }
        p
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for k in 1..self.differentials.len() {
            let dd = self.differentials[k].mul(&self.differentials[k - 1])?;
            let first = dd.triplets().next();
            if let Some((r, c, v)) = first {
                let i = self.offset + k as i64 - 1;
                let src = &self.columns[k - 1][c];
                let tgt = &self.columns[k + 1][r];
                return Err(Error::NotAComplex {
                    index: i,
                    detail: format!(
                        "{}: generator [{}] of state {:#b} reaches [{}] of state {:#b} with coefficient {v}",
                        self.label,
                        src.word_string(),
                        src.state,
                        tgt.word_string(),
                        tgt.state
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn check_degree_zero(&self) -> Result<()> {
        for (k, d) in self.differentials.iter().enumerate() {
            for (r, c, _) in d.triplets() {
                let (a, b) = (self.columns[k][c].degree, self.columns[k + 1][r].degree);
                if a != b {
                    return Err(Error::Inhomogeneous {
                        index: self.offset + k as i64,
                        detail: format!(
                            "{}: generator {c} of degree {:?} hits generator {r} of degree {:?}",
                            self.label, a.0, b.0
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// Height shift [s] (index i becomes i + s) and degree shift {l}.
    pub fn shift(&self, s: i64, l: MultiDegree) -> ChainComplex {
        let mut c = self.clone();
        c.offset += s;
        for col in &mut c.columns {
            for w in col {
                w.degree = w.degree + l;
            }
        }
        c
    }

    /// Tensor product with the Koszul sign (−1)^p on the second differential.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.grading.arity() != other.grading.arity() {
            return Err(Error::ArityMismatch(
                self.grading.arity(),
                other.grading.arity(),
            ));
        }
        let lo = self.min_index() + other.min_index();
        let hi = self.max_index() + other.max_index();
        // Block layout of each total column: (p, offset within column).
        let mut blocks: Vec<Vec<(i64, usize)>> = Vec::new();
        let mut columns = Vec::new();
        let shift = 32;
        for n in lo..=hi {
            let mut col = Vec::new();
            let mut bl = Vec::new();
            for p in self.indices() {
                let q = n - p;
                if !other.indices().contains(&q) {
                    continue;
                }
                bl.push((p, col.len()));
                for a in self.column(p) {
                    for b in other.column(q) {
                        let mut word = a.word.clone();
                        word.extend_from_slice(&b.word);
                        col.push(GradedBasisWord {
                            state: a.state | b.state << shift,
                            word,
                            degree: a.degree + b.degree,
                        });
                    }
                }
            }
            blocks.push(bl);
            columns.push(col);
        }
        let mut differentials = Vec::new();
        for (k, n) in (lo..hi).enumerate() {
            let mut trips = Vec::new();
            let find = |p: i64, blocks: &Vec<(i64, usize)>| {
                blocks.iter().find(|(bp, _)| *bp == p).map(|&(_, o)| o)
            };
            for &(p, off) in &blocks[k] {
                let q = n - p;
                let (ra, rb) = (self.rank(p), other.rank(q));
                if let Some(toff) = find(p + 1, &blocks[k + 1]) {
                    let da = self.differential(p);
                    for (r, c, v) in da.triplets() {
                        for y in 0..rb {
                            trips.push((toff + r * rb + y, off + c * rb + y, v));
                        }
                    }
                }
                if let Some(toff) = find(p, &blocks[k + 1]) {
                    let db = other.differential(q);
                    let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                    let rb2 = other.rank(q + 1);
                    for x in 0..ra {
                        for (r, c, v) in db.triplets() {
                            trips.push((toff + x * rb2 + r, off + x * rb + c, sign * v));
                        }
                    }
                }
            }
            differentials.push(SparseMatrix::from_triplets(
                columns[k + 1].len(),
                columns[k].len(),
                trips,
            )?);
        }
        Ok(ChainComplex {
            label: format!("{}⊗{}", self.label, other.label),
            grading: self.grading,
            offset: lo,
            columns,
            differentials,
        })
    }

    /// Stable JSON dump: per index the basis words with degrees, and differentials as triplets.
    pub fn to_json(&self) -> Value {
        let a = self.grading.arity();
        let columns: Vec<Value> = self
            .indices()
            .map(|i| {
                let basis: Vec<Value> = self
                    .column(i)
                    .iter()
                    .map(|w| json!({"state": w.state, "word": w.word_string(), "degree": &w.degree.0[..a]}))
                    .collect();
                json!({"index": i, "basis": basis})
            })
            .collect();
        let diffs: Vec<Value> = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let t: Vec<[i64; 3]> = d.triplets().map(|(r, c, v)| [r as i64, c as i64, v]).collect();
                json!({"index": self.offset + k as i64, "rows": d.nrows(), "cols": d.ncols(), "entries": t})
            })
            .collect();
        json!({"label": self.label, "grading": self.grading.vars(), "columns": columns, "differentials": diffs})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Factor::*;

    #[test]
    fn multiplication_table() {
        assert_eq!(frobenius_mul(VPlus, VPlus).unwrap(), Some(VPlus));
        assert_eq!(frobenius_mul(VMinus, VMinus).unwrap(), None);
        assert_eq!(frobenius_mul(VPlus, VMinus).unwrap(), Some(VMinus));
        assert_eq!(frobenius_mul(VMinus, VPlus).unwrap(), Some(VMinus));
        assert!(frobenius_mul(VPlus, X0).is_err());
    }

    #[test]
    fn comultiplication_table() {
        assert_eq!(
            frobenius_comul(VPlus).unwrap(),
            vec![(VPlus, VMinus), (VMinus, VPlus)]
        );
        assert_eq!(frobenius_comul(VMinus).unwrap(), vec![(VMinus, VMinus)]);
        assert!(frobenius_comul(UPlus).is_err());
    }

    #[test]
    fn genus_maps() {
        assert_eq!(
            genus_lower(&[VPlus, VMinus], FactorKind::V).unwrap(),
            vec![Vec::<Factor>::new()]
        );
        assert!(genus_lower(&[VPlus, VPlus], FactorKind::V)
            .unwrap()
            .is_empty());
        let mut got = genus_lower(&[VPlus, VPlus, VMinus, VMinus], FactorKind::V).unwrap();
        got.sort();
        assert_eq!(got, vec![vec![VPlus, VMinus], vec![VMinus, VPlus]]);
        assert!(genus_lower(&[], FactorKind::V).is_err());
        let up = genus_map(&[], FactorKind::U, 2).unwrap();
        assert_eq!(up.len(), 2);
    }

    #[test]
    fn coefficient_comultiplication() {
        assert_eq!(r_comul(&[]).unwrap(), vec![vec![X0]]);
        assert_eq!(r_comul(&[X0]).unwrap(), vec![vec![X0, X0]]);
        assert_eq!(
            r_comul(&[XMinus2]).unwrap(),
            vec![vec![XMinus2, X0], vec![X0, XMinus2]]
        );
        assert_eq!(
            r_comul(&[XMinus2, X0]).unwrap(),
            vec![vec![XMinus2, X0, X0]]
        );
    }

    #[test]
    fn signs() {
        assert_eq!(cube_sign(0b000, 2).unwrap(), 1);
        assert_eq!(cube_sign(0b001, 1).unwrap(), -1);
        assert_eq!(cube_sign(0b011, 2).unwrap(), 1);
        assert_eq!(cube_sign(0b001, 0), Err(Error::CoordinateSet(0)));
    }

    #[test]
    fn layout_round_trip() {
        let l = Layout {
            components: 1,
            vertices: 1,
            boundary: 2,
            genus: 2,
            genus_kind: FactorKind::U,
            coeffs: 1,
        };
        for i in 0..l.size() {
            assert_eq!(l.encode(&l.decode(i)).unwrap(), i);
        }
        assert_eq!(
            l.decode(l.size() - 1),
            vec![M1, VPlus, VPlus, VPlus, UPlus, UPlus, X0]
        );
    }
}
