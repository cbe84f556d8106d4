#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use fathom::cube::{ChainComplex, MultiDegree, SparseMatrix};
use fathom::{Fatgraph, Sign};

/// Rank over ℚ by plain Gaussian elimination.
pub fn rational_rank(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .to_dense()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    eliminate(&mut a, |x| x.is_zero(), |p, x| x / p, |a, b, k| a - b * k)
}

/// Rank over 𝔽_p.
pub fn rank_mod(m: &SparseMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let inv = |x: i64| (1..p).find(|y| x * y % p == 1).expect("prime modulus");
    eliminate(
        &mut a,
        |x| *x == 0,
        |piv, x| x * inv(*piv) % p,
        |a, b, k| (a - b * k).rem_euclid(p),
    )
}

fn eliminate<T: Clone>(
    a: &mut [Vec<T>],
    is_zero: impl Fn(&T) -> bool,
    div: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T, &T) -> T,
) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..rows {
            if r != rank && !is_zero(&a[r][c]) {
                let k = div(&pivot, &a[r][c]);
                let prow = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&prow) {
                    *x = sub(x, y, &k);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank and the small primes carrying torsion, per (index, degree), from dense ranks alone.
pub fn brute_homology(c: &ChainComplex) -> BTreeMap<(i64, MultiDegree), (usize, Vec<i64>)> {
    let mut degrees: BTreeMap<i64, Vec<MultiDegree>> = BTreeMap::new();
    for i in c.indices() {
        let mut ds: Vec<MultiDegree> = c.column(i).iter().map(|w| w.degree).collect();
        ds.sort();
        ds.dedup();
        degrees.insert(i, ds);
    }
    let mut out = BTreeMap::new();
    for (&i, ds) in &degrees {
        for &d in ds {
            let dim = c.column(i).iter().filter(|w| w.degree == d).count();
            let out_map = fathom::homology::graded_piece(c, i, d);
            let in_map = fathom::homology::graded_piece(c, i - 1, d);
            let (r_out, r_in) = (rational_rank(&out_map), rational_rank(&in_map));
            let primes: Vec<i64> = [2, 3, 5, 7, 11, 13]
                .into_iter()
                .filter(|&p| rank_mod(&in_map, p) < r_in)
                .collect();
            let free = dim - r_out - r_in;
            if free > 0 || !primes.is_empty() {
                out.insert((i, d), (free, primes));
            }
        }
    }
    out
}

/// Fatgraphs with 1..=3 vertices and up to `max_edges` edges, random rotations and signs.
pub fn arb_fatgraph(max_edges: usize) -> impl Strategy<Value = Fatgraph> {
    (1usize..=3, 0..=max_edges)
        .prop_flat_map(|(n, e)| {
            (
                Just(n),
                proptest::collection::vec((0..n, 0..n), e),
                proptest::collection::vec(any::<u32>(), 2 * e),
                proptest::collection::vec(any::<bool>(), e),
            )
        })
        .prop_map(|(n, edges, keys, signs)| {
            let mut rotations: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
            for (i, &(a, b)) in edges.iter().enumerate() {
                rotations[a].push((keys[2 * i], 2 * i));
                rotations[b].push((keys[2 * i + 1], 2 * i + 1));
            }
            let rotations = rotations
                .into_iter()
                .map(|mut r| {
                    r.sort();
                    r.into_iter().map(|(_, h)| h).collect()
                })
                .collect();
            let signs = signs
                .into_iter()
                .map(|s| if s { Sign::Plus } else { Sign::Minus })
                .collect();
            Fatgraph::new(rotations, signs).expect("every half-edge placed once")
        })
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Compares `content` with a checked-in golden file; `FATHOM_BLESS=1` rewrites it.
pub fn assert_golden_result(name: &str, content: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("FATHOM_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, content).unwrap();
        return Ok(());
    }
    match std::fs::read_to_string(&path) {
        Ok(expected) if expected == content => Ok(()),
        Ok(_) => Err(format!("golden file {} differs", path.display())),
        Err(_) => Err(format!(
            "missing golden file {}; run with FATHOM_BLESS=1",
            path.display()
        )),
    }
}

pub fn assert_golden(name: &str, content: &str) {
    if let Err(e) = assert_golden_result(name, content) {
        panic!("{e}");
    }
}
