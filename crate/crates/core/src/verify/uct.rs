//! Assembly of universal-coefficient decompositions from a smaller complex.

use std::collections::BTreeMap;

use crate::cube::{r_comul, Factor, Grading, MultiDegree, SparseMatrix};
use crate::error::{Error, Result};
use crate::homology::{invariant_factors, CycleRanks, HomologyGroup, HomologyTable};

type Words = Vec<Vec<Factor>>;

fn r_words(n: usize) -> Words {
    (0..1usize << n)
        .map(|bits| {
            (0..n)
                .map(|k| {
                    if bits >> (n - 1 - k) & 1 == 1 {
                        Factor::X0
                    } else {
                        Factor::XMinus2
                    }
                })
                .collect()
        })
        .collect()
}

fn r_degree(word: &[Factor]) -> i32 {
    word.iter().map(|f| f.degree().total()).sum()
}

/// Coefficient data in R-degree `l`: rank of △̄(R^{⊗(i−1)}) and the quotient R^{⊗i}/△̄(R^{⊗(i−1)}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientPiece {
    pub image_rank: usize,
    pub quotient: HomologyGroup,
}

/// Per-degree image ranks and quotients of △̄ : R^{⊗(i−1)} → R^{⊗i}; R^{⊗(−1)} is 0.
pub fn coefficient_pieces(i: usize) -> Result<BTreeMap<i32, CoefficientPiece>> {
    let targets = r_words(i);
    let mut by_degree: BTreeMap<i32, (Words, Words)> = BTreeMap::new();
    for w in targets {
        by_degree.entry(r_degree(&w)).or_default().1.push(w);
    }
    if i > 0 {
        for w in r_words(i - 1) {
            by_degree.entry(r_degree(&w)).or_default().0.push(w);
        }
    }
    let mut out = BTreeMap::new();
    for (l, (src, tgt)) in by_degree {
        let mut cols = Vec::new();
        for w in &src {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            for img in r_comul(w)? {
                let pos = tgt
                    .iter()
                    .position(|t| *t == img)
                    .ok_or_else(|| Error::Internal(format!("△̄ leaves degree {l}")))?;
                *col.entry(pos).or_default() += 1;
            }
            cols.push(col.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        let f = invariant_factors(&SparseMatrix::from_columns(tgt.len(), cols)?)?;
        out.insert(
            l,
            CoefficientPiece {
                image_rank: f.rank,
                quotient: HomologyGroup::from_cyclic(tgt.len() - f.rank, f.torsion),
            },
        );
    }
    Ok(out)
}

/// rank of V^{⊗v} in degree q.
pub fn v_power_rank(v: usize, q: i32) -> usize {
    let v = v as i64;
    let q = q as i64;
    if q.abs() > v || (q + v) % 2 != 0 {
        return 0;
    }
    let k = ((q + v) / 2) as u64;
    (0..k).fold(1u64, |acc, j| acc * (v as u64 - j) / (j + 1)) as usize
}

/// Degrees carried by V^{⊗v}.
pub fn v_power_degrees(v: usize) -> impl Iterator<Item = i32> {
    (0..=v as i32).map(move |k| 2 * k - v as i32)
}

/// Where the coefficient degree of R lands in a grading.
fn r_shift(grading: Grading, l: i32) -> MultiDegree {
    match grading {
        Grading::QRS => MultiDegree([0, 0, l]),
        _ => MultiDegree::q(l),
    }
}

/// ⊕ [Ĥ^i_p ⊗ △̄(R^{⊗(i−1)})_l ⊕ Z^i_p ⊗ R^{⊗i}_l/△̄(R^{⊗(i−1)})_l] ⊗ V^{⊗v}_q, summed into degree p + l + q.
pub fn predict(
    small: &HomologyTable,
    cycles: &CycleRanks,
    v: usize,
    grading: Grading,
    label: &str,
) -> Result<HomologyTable> {
    let mut out = HomologyTable::new(label, grading);
    let mut cache: BTreeMap<i64, BTreeMap<i32, CoefficientPiece>> = BTreeMap::new();
    for (&(i, p), &z) in cycles {
        if i < 0 {
            return Err(Error::Internal(format!(
                "{label}: negative index {i} in an unnormalized complex"
            )));
        }
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(i) {
            e.insert(coefficient_pieces(i as usize)?);
        }
        let h = small.get(i, p);
        for (&l, piece) in &cache[&i] {
            let g = h
                .times(piece.image_rank)
                .direct_sum(&HomologyGroup::free(z).tensor(&piece.quotient));
            if g.is_zero() {
                continue;
            }
            for q in v_power_degrees(v) {
                out.add(
                    i,
                    p + r_shift(grading, l) + MultiDegree::q(q),
                    &g.times(v_power_rank(v, q)),
                );
            }
        }
    }
    Ok(out)
}

/// Solves S_j = ⊕_q P_{j−q}^{rank V^{⊗v}_q} for P, slice by slice in the first degree slot.
///
/// Returns `None` when `s` is not of this form.
pub fn deconvolve(s: &HomologyTable, v: usize) -> Option<HomologyTable> {
    let mut slices: BTreeMap<(i64, i32, i32), BTreeMap<i32, HomologyGroup>> = BTreeMap::new();
    for (&(i, d), g) in &s.entries {
        slices
            .entry((i, d.0[1], d.0[2]))
            .or_default()
            .insert(d.0[0], g.clone());
    }
    let vi = v as i32;
    let mut out = HomologyTable::new(s.label.clone(), s.grading);
    for ((i, k, l), slice) in slices {
        let lo = *slice.keys().next()? + vi;
        let hi = *slice.keys().last()? + vi;
        let mut solved: BTreeMap<i32, HomologyGroup> = BTreeMap::new();
        for p in lo..=hi {
            let mut rest = slice.get(&(p - vi)).cloned().unwrap_or_default();
            for q in v_power_degrees(v).filter(|&q| q > -vi) {
                if let Some(prev) = solved.get(&(p - vi - q)) {
                    rest = rest.checked_sub(&prev.times(v_power_rank(v, q)))?;
                }
            }
            if !rest.is_zero() {
                solved.insert(p, rest);
            }
        }
        for (p, g) in solved {
            out.add(i, MultiDegree([p, k, l]), &g);
        }
    }
    let mut check = HomologyTable::new(s.label.clone(), s.grading);
    for (&(i, d), g) in &out.entries {
        for q in v_power_degrees(v) {
            check.add(i, d + MultiDegree::q(q), &g.times(v_power_rank(v, q)));
        }
    }
    (check.entries == s.entries).then_some(out)
}
