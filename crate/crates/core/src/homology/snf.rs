//! Smith normal form over the integers.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cube::SparseMatrix;
use crate::error::{Error, Result};

/// Diagonal form `U·M·V = D` with `d₁ | d₂ | …`, all `dᵢ > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row[i] -= k · row[j]
    fn row_sub(&mut self, i: usize, j: usize, k: &BigInt) {
        fn op(m: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
            let (src, dst) = if i < j {
                let (a, b) = m.split_at_mut(j);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = m.split_at_mut(i);
                (&a[j], &mut b[0])
            };
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d -= k * s;
                }
            }
        }
        op(&mut self.a, i, j, k);
        if let Some(u) = &mut self.u {
            op(u, i, j, k);
        }
    }

    /// col[i] -= k · col[j]
    fn col_sub(&mut self, i: usize, j: usize, k: &BigInt) {
        fn op(m: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
            for row in m {
                if !row[j].is_zero() {
                    let t = k * &row[j];
                    row[i] -= t;
                }
            }
        }
        op(&mut self.a, i, j, k);
        if let Some(v) = &mut self.v {
            op(v, i, j, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }
}

fn diagonalize(w: &mut Work) -> Vec<BigInt> {
    let rows = w.a.len();
    let cols = w.a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !w.a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let k = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_sub(i, t, &k);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let k = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_sub(j, t, &k);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &w.a[t][t]).is_zero()));
            if let Some(i) = bad {
                w.row_sub(t, i, &-BigInt::one());
                continue;
            }
            if w.a[t][t].is_negative() {
                w.negate_row(t);
            }
            diag.push(w.a[t][t].clone());
            break;
        }
    }
    diag
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut w = Work {
        a: m.to_vec(),
        u: Some(identity(rows)),
        v: Some(identity(cols)),
    };
    let diagonal = diagonalize(&mut w);
    Snf {
        diagonal,
        u: w.u.unwrap_or_default(),
        v: w.v.unwrap_or_default(),
    }
}

/// Invariant factors of a dense matrix, without transforms.
pub fn dense_invariant_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut w = Work {
        a: m.to_vec(),
        u: None,
        v: None,
    };
    diagonalize(&mut w)
}

/// Rank and the invariant factors above 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantFactors {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// Invariant factors of a sparse matrix: unit pivots are eliminated sparsely and the
/// remainder goes through dense Smith normal form.
pub fn invariant_factors(m: &SparseMatrix) -> Result<InvariantFactors> {
    let mut cols: Vec<HashMap<usize, i64>> = m
        .columns()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.nrows()];
    for (r, c, _) in m.triplets() {
        rows[r].insert(c);
    }
    let mut order: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    order.sort_by_key(|&c| cols[c].len());
    let mut rank = 0;
    loop {
        let mut progress = false;
        for &pc in &order {
            let Some(pr) = cols[pc]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .map(|(&r, _)| r)
                .min_by_key(|&r| (rows[r].len(), r))
            else {
                continue;
            };
            progress = true;
            rank += 1;
            let pv = cols[pc][&pr];
            let pivot_col: Vec<(usize, i64)> = cols[pc].iter().map(|(&r, &v)| (r, v)).collect();
            let others: Vec<usize> = rows[pr].iter().copied().filter(|&c| c != pc).collect();
            for c in others {
                let k = cols[c][&pr].checked_mul(pv).ok_or_else(overflow)?;
                for &(r, v) in &pivot_col {
                    let entry = cols[c].entry(r).or_insert(0);
                    let was_zero = *entry == 0;
                    *entry = k
                        .checked_mul(v)
                        .and_then(|kv| entry.checked_sub(kv))
                        .ok_or_else(overflow)?;
                    if *entry == 0 {
                        cols[c].remove(&r);
                        rows[r].remove(&c);
                    } else if was_zero {
                        rows[r].insert(c);
                    }
                }
            }
            for &(r, _) in &pivot_col {
                rows[r].remove(&pc);
            }
            cols[pc].clear();
        }
        order.retain(|&c| !cols[c].is_empty());
        if !progress {
            break;
        }
    }
    let live = order;
    if live.is_empty() {
        return Ok(InvariantFactors {
            rank,
            torsion: Vec::new(),
        });
    }
    let mut row_ids: Vec<usize> = live.iter().flat_map(|&c| cols[c].keys().copied()).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    let index: HashMap<usize, usize> = row_ids.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut dense = vec![vec![BigInt::zero(); live.len()]; row_ids.len()];
    for (j, &c) in live.iter().enumerate() {
        for (&r, &v) in &cols[c] {
            dense[index[&r]][j] = BigInt::from(v);
        }
    }
    let diag = dense_invariant_factors(&dense);
    rank += diag.len();
    let mut torsion = Vec::new();
    for d in diag {
        if !d.is_one() {
            torsion.push(
                d.to_u64().ok_or_else(|| {
                    Error::Internal(format!("torsion coefficient {d} exceeds u64"))
                })?,
            );
        }
    }
    Ok(InvariantFactors { rank, torsion })
}

fn overflow() -> Error {
    Error::Internal("entry overflowed i64 during elimination".into())
}
