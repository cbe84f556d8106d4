//! Integral homology of graded cochain complexes.

mod snf;

pub use snf::{
    dense_invariant_factors, invariant_factors, smith_normal_form, InvariantFactors, Snf,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cube::{ChainComplex, Grading, MultiDegree, SparseMatrix};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// ℤ^free ⊕ ⊕ ℤ/dᵢ with d₁ | d₂ | … and every dᵢ > 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free: usize,
    pub torsion: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of ℤ^free ⊕ ⊕ ℤ/cᵢ for arbitrary cyclic orders (orders ≤ 1 are dropped).
    pub fn from_cyclic(free: usize, orders: impl IntoIterator<Item = u64>) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for c in orders {
            if c > 1 {
                for (p, q) in prime_powers(c) {
                    by_prime.entry(p).or_default().push(q);
                }
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                torsion[i] *= q;
            }
        }
        torsion.reverse();
        HomologyGroup { free, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    /// Prime-power decomposition of the torsion part.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .torsion
            .iter()
            .flat_map(|&d| prime_powers(d).into_iter().map(|(_, q)| q))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn direct_sum(&self, other: &HomologyGroup) -> Self {
        HomologyGroup::from_cyclic(
            self.free + other.free,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    /// `n` copies.
    pub fn times(&self, n: usize) -> Self {
        HomologyGroup::from_cyclic(
            self.free * n,
            (0..n).flat_map(|_| self.torsion.iter().copied()),
        )
    }

    pub fn tensor(&self, other: &HomologyGroup) -> Self {
        let mut orders: Vec<u64> = Vec::new();
        for _ in 0..other.free {
            orders.extend(&self.torsion);
        }
        for _ in 0..self.free {
            orders.extend(&other.torsion);
        }
        for &a in &self.torsion {
            for &b in &other.torsion {
                orders.push(num_integer::gcd(a, b));
            }
        }
        HomologyGroup::from_cyclic(self.free * other.free, orders)
    }

    pub fn tor(&self, other: &HomologyGroup) -> Self {
        let orders = self
            .torsion
            .iter()
            .flat_map(|&a| other.torsion.iter().map(move |&b| num_integer::gcd(a, b)));
        HomologyGroup::from_cyclic(0, orders.collect::<Vec<_>>())
    }

    /// The complement of `other` as a direct summand, if it is one up to isomorphism.
    pub fn checked_sub(&self, other: &HomologyGroup) -> Option<Self> {
        let free = self.free.checked_sub(other.free)?;
        let mut mine = self.elementary_divisors();
        for d in other.elementary_divisors() {
            let pos = mine.iter().position(|&x| x == d)?;
            mine.remove(pos);
        }
        Some(HomologyGroup::from_cyclic(free, mine))
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

/// Nonzero homology groups keyed by (cohomological index, degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub label: String,
    pub grading: Grading,
    pub entries: BTreeMap<(i64, MultiDegree), HomologyGroup>,
}

impl HomologyTable {
    pub fn new(label: impl Into<String>, grading: Grading) -> Self {
        HomologyTable {
            label: label.into(),
            grading,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, i: i64, d: MultiDegree) -> HomologyGroup {
        self.entries.get(&(i, d)).cloned().unwrap_or_default()
    }

    /// Adds `g` into the entry at (i, d).
    pub fn add(&mut self, i: i64, d: MultiDegree, g: &HomologyGroup) {
        if g.is_zero() {
            return;
        }
        let e = self.entries.entry((i, d)).or_default();
        *e = e.direct_sum(g);
    }

    /// Same groups, ignoring labels.
    pub fn same_groups(&self, other: &HomologyTable) -> bool {
        self.entries == other.entries
    }

    /// Entries at one cohomological index.
    pub fn at_index(&self, i: i64) -> impl Iterator<Item = (MultiDegree, &HomologyGroup)> {
        self.entries
            .iter()
            .filter(move |((j, _), _)| *j == i)
            .map(|((_, d), g)| (*d, g))
    }

    pub fn indices(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.entries.keys().map(|(i, _)| *i).collect();
        v.dedup();
        v
    }

    /// Graded rank of the free part of H^i.
    pub fn qdim(&self, i: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (d, g) in self.at_index(i) {
            p += &self.grading.monomial(d, g.free as i64);
        }
        p
    }

    /// Reindexes every entry.
    pub fn map_keys(&self, f: impl Fn(i64, MultiDegree) -> (i64, MultiDegree)) -> HomologyTable {
        let mut out = HomologyTable::new(self.label.clone(), self.grading);
        for (&(i, d), g) in &self.entries {
            let (ni, nd) = f(i, d);
            out.add(ni, nd, g);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let a = self.grading.arity();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|((i, d), g)| json!({"index": i, "degree": &d.0[..a], "free": g.free, "torsion": g.torsion}))
            .collect();
        json!({"complex": self.label, "grading": self.grading.vars(), "entries": entries})
    }
}

/// First key where two tables disagree, with (left, right) groups.
pub fn first_difference(
    a: &HomologyTable,
    b: &HomologyTable,
) -> Option<(i64, MultiDegree, HomologyGroup, HomologyGroup)> {
    let keys: BTreeSet<&(i64, MultiDegree)> = a.entries.keys().chain(b.entries.keys()).collect();
    keys.into_iter().find_map(|&(i, d)| {
        let (x, y) = (a.get(i, d), b.get(i, d));
        (x != y).then_some((i, d, x, y))
    })
}

/// Normalized Khovanov homology from the unnormalized table: Hⁱ_j ↦ H^{i−n₋}_{j+n₊−2n₋}.
pub fn khovanov_reindex(h: &HomologyTable, n_minus: i64, n_plus: i64) -> HomologyTable {
    let l = MultiDegree::q((n_plus - 2 * n_minus) as i32);
    h.map_keys(|i, d| (i - n_minus, d + l))
}

/// Generator positions of each degree in a column.
fn pieces(c: &ChainComplex, i: i64) -> HashMap<MultiDegree, Vec<usize>> {
    let mut m: HashMap<MultiDegree, Vec<usize>> = HashMap::new();
    for (k, w) in c.column(i).iter().enumerate() {
        m.entry(w.degree).or_default().push(k);
    }
    m
}

/// Restriction of d^i to degree `d`.
pub fn graded_piece(c: &ChainComplex, i: i64, d: MultiDegree) -> SparseMatrix {
    let src: Vec<usize> = positions(c, i, d);
    let tgt: Vec<usize> = positions(c, i + 1, d);
    c.differential(i).submatrix(&tgt, &src)
}

fn positions(c: &ChainComplex, i: i64, d: MultiDegree) -> Vec<usize> {
    c.column(i)
        .iter()
        .enumerate()
        .filter(|(_, w)| w.degree == d)
        .map(|(k, _)| k)
        .collect()
}

/// Invariant factors of every graded piece of every differential.
fn piece_factors(c: &ChainComplex) -> Result<HashMap<(i64, MultiDegree), InvariantFactors>> {
    let mut jobs = Vec::new();
    for i in c.indices() {
        let tgt = pieces(c, i + 1);
        for (d, src) in pieces(c, i) {
            if let Some(t) = tgt.get(&d) {
                jobs.push((i, d, src, t.clone()));
            }
        }
    }
    let results: Vec<Result<((i64, MultiDegree), InvariantFactors)>> = jobs
        .into_par_iter()
        .map(|(i, d, src, tgt)| {
            let m = c
                .differential_ref(i)
                .map(|m| m.submatrix(&tgt, &src))
                .unwrap_or_else(|| SparseMatrix::zeros(tgt.len(), src.len()));
            Ok(((i, d), invariant_factors(&m)?))
        })
        .collect();
    results.into_iter().collect()
}

/// H^i = ker dⁱ / im d^{i−1}, computed separately in every degree.
pub fn homology_of(c: &ChainComplex) -> Result<HomologyTable> {
    c.check_degree_zero()?;
    let f = piece_factors(c)?;
    let mut table = HomologyTable::new(c.label.clone(), c.grading);
    for i in c.indices() {
        for (d, gens) in pieces(c, i) {
            let out = f.get(&(i, d)).map_or(0, |x| x.rank);
            let (inc_rank, torsion) = f
                .get(&(i - 1, d))
                .map_or((0, Vec::new()), |x| (x.rank, x.torsion.clone()));
            let free =
                gens.len()
                    .checked_sub(out + inc_rank)
                    .ok_or_else(|| Error::NotAComplex {
                        index: i,
                        detail: format!("{}: ranks exceed dimension in degree {:?}", c.label, d.0),
                    })?;
            table.add(i, d, &HomologyGroup::from_cyclic(free, torsion));
        }
    }
    Ok(table)
}

/// rank ker(dⁱ) keyed by (index, degree).
pub type CycleRanks = BTreeMap<(i64, MultiDegree), usize>;

/// rank ker(dⁱ) in every degree.
pub fn cycle_ranks(c: &ChainComplex) -> Result<CycleRanks> {
    let f = piece_factors(c)?;
    let mut out = BTreeMap::new();
    for i in c.indices() {
        for (d, gens) in pieces(c, i) {
            out.insert((i, d), gens.len() - f.get(&(i, d)).map_or(0, |x| x.rank));
        }
    }
    Ok(out)
}

/// How the grading variables appear in a Poincaré polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Keep each grading variable.
    PerVariable,
    /// Collapse to the total degree in `q`.
    Total,
}

/// Σ tⁱ qdim(Hⁱ) over free ranks.
pub fn poincare(h: &HomologyTable, projection: Projection) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (&(i, d), g) in &h.entries {
        if g.free == 0 {
            continue;
        }
        let m = match projection {
            Projection::PerVariable => h.grading.monomial(d, g.free as i64),
            Projection::Total => LaurentPoly::monomial(&["q"], &[d.total()], g.free as i64),
        };
        p += &(&m * &LaurentPoly::var_pow("t", i as i32));
    }
    p
}

/// Σ (−1)ⁱ qdim(Hⁱ).
pub fn euler(h: &HomologyTable) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (&(i, d), g) in &h.entries {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        p += &h.grading.monomial(d, sign * g.free as i64);
    }
    p
}

/// Künneth prediction for the tensor product of two cochain complexes:
/// ⊕_{p+q=i} H^p ⊗ H^q ⊕ ⊕_{p+q=i+1} Tor(H^p, H^q).
pub fn kunneth_predict(a: &HomologyTable, b: &HomologyTable) -> Result<HomologyTable> {
    if a.grading.arity() != b.grading.arity() {
        return Err(Error::ArityMismatch(a.grading.arity(), b.grading.arity()));
    }
    let mut out = HomologyTable::new(format!("{}⊗{}", a.label, b.label), a.grading);
    for (&(i, d), g) in &a.entries {
        for (&(j, e), h) in &b.entries {
            out.add(i + j, d + e, &g.tensor(h));
            out.add(i + j - 1, d + e, &g.tor(h));
        }
    }
    Ok(out)
}

impl ChainComplex {
    pub(crate) fn differential_ref(&self, i: i64) -> Option<&SparseMatrix> {
        let k = i - self.offset;
        if k >= 0 && (k as usize) < self.differentials.len() {
            Some(&self.differentials[k as usize])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_torsion() {
        assert_eq!(HomologyGroup::from_cyclic(0, [2, 3]).torsion, vec![6]);
        assert_eq!(
            HomologyGroup::from_cyclic(0, [2, 4, 3]).torsion,
            vec![2, 12]
        );
        assert_eq!(
            HomologyGroup::from_cyclic(1, [1, 1]).torsion,
            Vec::<u64>::new()
        );
    }

    #[test]
    fn tor_and_tensor() {
        let z2 = HomologyGroup::from_cyclic(0, [2]);
        let z4 = HomologyGroup::from_cyclic(0, [4]);
        assert_eq!(z2.tor(&z4), z2);
        assert_eq!(z2.tensor(&z4), z2);
        let free = HomologyGroup::free(2);
        assert_eq!(free.tensor(&z4).torsion, vec![4, 4]);
        assert!(free.tor(&z4).is_zero());
    }

    #[test]
    fn subtraction_and_display() {
        let g = HomologyGroup::from_cyclic(3, [2, 4]);
        assert_eq!(
            g.checked_sub(&HomologyGroup::from_cyclic(1, [4])),
            Some(HomologyGroup::from_cyclic(2, [2]))
        );
        assert_eq!(g.checked_sub(&HomologyGroup::from_cyclic(0, [8])), None);
        assert_eq!(g.checked_sub(&HomologyGroup::free(4)), None);
        assert_eq!(g.to_string(), "Z^3 + Z/2 + Z/4");
        assert_eq!(HomologyGroup::default().to_string(), "0");
    }

    #[test]
    fn khovanov_reindexing() {
        let mut h = HomologyTable::new("k", Grading::Q);
        h.add(1, MultiDegree::q(3), &HomologyGroup::free(2));
        assert_eq!(khovanov_reindex(&h, 0, 0), h);
        let r = khovanov_reindex(&h, 1, 0);
        assert_eq!(r.get(0, MultiDegree::q(1)), HomologyGroup::free(2));
        assert_eq!(khovanov_reindex(&khovanov_reindex(&h, 2, 3), -2, -3), h);
    }

    #[test]
    fn small_chromatic_tables() {
        use crate::builders::chromatic_complex;
        use crate::fatgraph::{Fatgraph, Sign};
        let b = LaurentPoly::balanced("q");
        let h = homology_of(&chromatic_complex(&Fatgraph::empty(1), true).unwrap()).unwrap();
        assert_eq!(h.qdim(0), b.pow(2));
        let path = Fatgraph::new(vec![vec![0], vec![1]], vec![Sign::Minus]).unwrap();
        let h = homology_of(&chromatic_complex(&path, true).unwrap()).unwrap();
        assert!(h.qdim(-1).is_zero());
        assert_eq!(h.qdim(0), &b.pow(3) * &(&b.pow(2) - &LaurentPoly::one()));
        let lp = Fatgraph::new(vec![vec![0, 1]], vec![Sign::Minus]).unwrap();
        let h = homology_of(&chromatic_complex(&lp, true).unwrap()).unwrap();
        let qi = LaurentPoly::var_pow("q", -1);
        assert_eq!(
            h.qdim(-1),
            &(&LaurentPoly::one() + &LaurentPoly::var_pow("q", -2)) * &b
        );
        assert_eq!(h.qdim(0), &qi * &b.pow(2));
        assert!(h.entries.values().all(|g| g.torsion.is_empty()));
        assert!(euler(&h).is_zero());
    }
}
