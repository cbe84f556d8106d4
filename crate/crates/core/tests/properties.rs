mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::sample::subsequence;

use common::{arb_fatgraph, brute_homology};
use fathom::builders::{chromatic_complex, BuildOptions, Family};
use fathom::cube::{Grading, MultiDegree};
use fathom::homology::{euler, homology_of, smith_normal_form, HomologyGroup, HomologyTable};
use fathom::io::FatgraphDocument;
use fathom::verify::corpus::map_code;
use fathom::verify::family_complex;
use fathom::verify::uct::{deconvolve, v_power_degrees, v_power_rank};
use fathom::{Error, Fatgraph};

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn with_permutation(max_edges: usize) -> impl Strategy<Value = (Fatgraph, Vec<usize>)> {
    arb_fatgraph(max_edges).prop_flat_map(|fg| {
        let e = fg.num_edges();
        (Just(fg), arb_permutation(e))
    })
}

fn arb_group() -> impl Strategy<Value = HomologyGroup> {
    (
        0usize..4,
        proptest::collection::vec(
            prop_oneof![Just(2u64), Just(3), Just(4), Just(6), Just(9)],
            0..3,
        ),
    )
        .prop_map(|(free, t)| HomologyGroup::from_cyclic(free, t))
}

fn multiply(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum())
                .collect()
        })
        .collect()
}

/// Signed families are complexes when every state has genus 0 or no square mixes genus lowering and raising.
fn squares_guaranteed(fg: &Fatgraph, family: Family) -> bool {
    !matches!(family, Family::Trigraded | Family::HatTrigraded)
        || fg.genus() == 0
        || fg.signs().windows(2).all(|w| w[0] == w[1])
}

fn torsion_primes(h: &HomologyTable, i: i64, d: MultiDegree) -> Vec<i64> {
    let g = h.get(i, d);
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|p| g.torsion.iter().any(|t| t % p == 0))
        .map(|p| p as i64)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surface_euler_relation_on_every_state(fg in arb_fatgraph(4)) {
        for s in fg.states().unwrap() {
            let st = s.stats;
            prop_assert_eq!(st.v as i64 - st.e as i64 + st.p as i64, 2 * st.k as i64 - 2 * st.g as i64);
        }
    }

    #[test]
    fn removing_an_edge_moves_p_by_one((fg, _) in with_permutation(4)) {
        for s in fg.states().unwrap() {
            for j in (0..fg.num_edges()).filter(|j| s.mask >> j & 1 == 1) {
                let smaller = fg.stats(s.mask & !(1 << j)).unwrap();
                prop_assert_eq!((smaller.p as i64 - s.stats.p as i64).abs(), 1);
                prop_assert!(s.stats.g == smaller.g || s.stats.g == smaller.g + 1);
            }
        }
    }

    #[test]
    fn contraction_drops_one_vertex_and_edge(fg in arb_fatgraph(4)) {
        for e in 0..fg.num_edges() {
            match fg.contract_edge(e) {
                Ok(c) => {
                    prop_assert!(!fg.is_loop(e));
                    prop_assert_eq!(c.num_vertices(), fg.num_vertices() - 1);
                    prop_assert_eq!(c.num_edges(), fg.num_edges() - 1);
                    prop_assert_eq!(c.genus(), fg.genus());
                }
                Err(err) => {
                    prop_assert!(fg.is_loop(e));
                    prop_assert_eq!(err, Error::LoopContraction(e));
                }
            }
        }
    }

    #[test]
    fn relabeling_preserves_boundary_and_map_code((fg, perm) in with_permutation(4)) {
        let r = fg.relabel_edges(&perm).unwrap();
        prop_assert_eq!(r.boundary_count(r.full_mask()), fg.boundary_count(fg.full_mask()));
        prop_assert_eq!(map_code(&r), map_code(&fg));
    }

    #[test]
    fn document_round_trip(fg in arb_fatgraph(4)) {
        let text = FatgraphDocument::from_fatgraph(&fg).to_json();
        let doc = FatgraphDocument::parse(&text).unwrap();
        prop_assert_eq!(doc.fatgraph().unwrap(), fg);
        prop_assert_eq!(doc.to_json(), text);
    }

    #[test]
    fn euler_characteristic_from_chains(fg in arb_fatgraph(3)) {
        for family in Family::ALL.into_iter().filter(|&f| squares_guaranteed(&fg, f)) {
            let c = match family_complex(&fg, family, &BuildOptions::default()) {
                Ok(c) => c,
                Err(Error::NonzeroGenus(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            prop_assert_eq!(euler(&homology_of(&c).unwrap()), c.chain_euler(), "{}", family.name());
        }
    }

    #[test]
    fn homology_matches_dense_rank_oracle(fg in arb_fatgraph(2)) {
        for family in [Family::Chromatic, Family::Restricted, Family::Trigraded].into_iter().filter(|&f| squares_guaranteed(&fg, f)) {
            let c = family_complex(&fg, family, &BuildOptions::default()).unwrap();
            let h = homology_of(&c).unwrap();
            let brute = brute_homology(&c);
            let keys: BTreeSet<(i64, MultiDegree)> = h.entries.keys().chain(brute.keys()).copied().collect();
            for (i, d) in keys {
                let (free, primes) = brute.get(&(i, d)).cloned().unwrap_or_default();
                prop_assert_eq!(h.get(i, d).free, free);
                prop_assert_eq!(torsion_primes(&h, i, d), primes);
            }
        }
    }

    #[test]
    fn homology_ignores_edge_labels((fg, perm) in with_permutation(3)) {
        let a = homology_of(&chromatic_complex(&fg, false).unwrap()).unwrap();
        let b = homology_of(&chromatic_complex(&fg.relabel_edges(&perm).unwrap(), false).unwrap()).unwrap();
        prop_assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn top_index_survives(fg in arb_fatgraph(3)) {
        prop_assume!(fg.num_edges() > 0);
        let h = homology_of(&chromatic_complex(&fg, false).unwrap()).unwrap();
        prop_assert!(h.at_index(fg.num_edges() as i64).any(|(_, g)| !g.is_zero()));
    }

    #[test]
    fn normalization_reindexes(fg in arb_fatgraph(3)) {
        let e = fg.num_edges() as i64;
        let raw = homology_of(&chromatic_complex(&fg, false).unwrap()).unwrap();
        let normalized = homology_of(&chromatic_complex(&fg, true).unwrap()).unwrap();
        prop_assert_eq!(normalized.map_keys(|i, d| (i + e, d)).entries, raw.entries);
    }

    #[test]
    fn smith_form_reconstructs(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-6i64..7, 36)) {
        let m: Vec<Vec<BigInt>> = (0..rows).map(|r| (0..cols).map(|c| BigInt::from(seed[r * 6 + c])).collect()).collect();
        let snf = smith_normal_form(&m);
        let d = multiply(&multiply(&snf.u, &m), &snf.v);
        for (r, row) in d.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let want = if r == c { snf.diagonal.get(r).cloned().unwrap_or_default() } else { BigInt::zero() };
                prop_assert_eq!(x, &want);
            }
        }
        for w in snf.diagonal.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn group_algebra(a in arb_group(), b in arb_group(), c in arb_group()) {
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
        prop_assert_eq!(a.direct_sum(&b).direct_sum(&c), a.direct_sum(&b.direct_sum(&c)));
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        prop_assert_eq!(a.tor(&b), b.tor(&a));
        prop_assert_eq!(a.tensor(&b.direct_sum(&c)), a.tensor(&b).direct_sum(&a.tensor(&c)));
        prop_assert_eq!(a.direct_sum(&b).checked_sub(&b), Some(a.clone()));
        prop_assert_eq!(a.times(3), a.direct_sum(&a).direct_sum(&a));
    }

    #[test]
    fn deconvolution_inverts_v_tensoring(
        entries in subsequence((0..12).collect::<Vec<i32>>(), 0..6),
        groups in proptest::collection::vec(arb_group(), 6),
        v in 0usize..4,
    ) {
        let mut p = HomologyTable::new("p", Grading::QRS);
        for (n, &k) in entries.iter().enumerate() {
            p.add((k % 3) as i64, MultiDegree([k - 6, k % 2, 0]), &groups[n]);
        }
        let mut s = HomologyTable::new("s", Grading::QRS);
        for (&(i, d), g) in &p.entries {
            for q in v_power_degrees(v) {
                s.add(i, d + MultiDegree::q(q), &g.times(v_power_rank(v, q)));
            }
        }
        prop_assert_eq!(deconvolve(&s, v).map(|t| t.entries), Some(p.entries));
    }
}
