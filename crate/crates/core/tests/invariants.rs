mod common;

use std::collections::BTreeMap;

use fathom::builders::{build_complex, build_cube, chromatic_complex, BuildOptions, Family};
use fathom::cube::cube_sign;
use fathom::fatgraph::{enumerate_rotation_systems, rotation_system_count};
use fathom::homology::homology_of;
use fathom::io::FatgraphDocument;
use fathom::laurent::{bollobas_riordan, chromatic};
use fathom::verify::corpus::{fatgraph_corpus, graph_corpus};
use fathom::{Error, Fatgraph, LaurentPoly, Sign};

fn corpus() -> Vec<Fatgraph> {
    fatgraph_corpus(3, 4).unwrap()
}

#[test]
fn every_state_edge_removal_moves_boundary_and_genus() {
    for fg in corpus() {
        for s in fg.states().unwrap() {
            let st = s.stats;
            assert_eq!(
                st.v as i64 - st.e as i64 + st.p as i64,
                2 * st.k as i64 - 2 * st.g as i64
            );
            for j in (0..fg.num_edges()).filter(|j| s.mask >> j & 1 == 1) {
                let t = fg.stats(s.mask & !(1 << j)).unwrap();
                assert_eq!(
                    (t.p as i64 - st.p as i64).abs(),
                    1,
                    "{fg:?} mask {:#b} edge {j}",
                    s.mask
                );
                assert!(st.g == t.g || st.g == t.g + 1);
            }
        }
    }
}

#[test]
fn rotation_system_counts() {
    for g in graph_corpus(3, 4, false, false) {
        let expected: u128 = (0..g.n)
            .map(|v| (1..g.degree(v).max(1) as u128).product::<u128>())
            .product();
        assert_eq!(rotation_system_count(&g), expected);
        assert_eq!(
            enumerate_rotation_systems(&g, None).unwrap().count() as u128,
            expected
        );
    }
}

#[test]
fn chromatic_vanishes_with_loops() {
    for g in graph_corpus(4, 4, false, false)
        .into_iter()
        .filter(|g| g.has_loop())
    {
        assert!(chromatic(&g).unwrap().is_zero(), "{g:?}");
    }
}

#[test]
fn bollobas_riordan_z_exponents_are_even() {
    for fg in corpus() {
        let p = bollobas_riordan(&fg).unwrap();
        let z = p.vars().iter().position(|v| v == "z");
        for (exps, _) in p.terms() {
            if let Some(z) = z {
                assert_eq!(exps[z] % 2, 0);
            }
        }
    }
}

#[test]
fn two_faces_carry_an_odd_number_of_signs() {
    for dim in 2..6 {
        for alpha in 0u64..1 << dim {
            for j in 0..dim {
                for k in j + 1..dim {
                    if alpha >> j & 1 == 1 || alpha >> k & 1 == 1 {
                        continue;
                    }
                    let signs = [
                        cube_sign(alpha, j).unwrap(),
                        cube_sign(alpha | 1 << j, k).unwrap(),
                        cube_sign(alpha, k).unwrap(),
                        cube_sign(alpha | 1 << k, j).unwrap(),
                    ];
                    assert_eq!(signs.iter().filter(|&&s| s == -1).count() % 2, 1);
                }
            }
        }
    }
}

#[test]
fn every_cube_face_anticommutes() {
    for fg in fatgraph_corpus(3, 3).unwrap() {
        for family in [
            Family::Chromatic,
            Family::Restricted,
            Family::Trigraded,
            Family::HatTrigraded,
        ] {
            build_cube(&fg, family, &BuildOptions::default())
                .unwrap()
                .check_faces()
                .unwrap();
        }
    }
}

#[test]
fn chromatic_columns_match_state_sum() {
    let b = LaurentPoly::balanced("q");
    let r = LaurentPoly::one() + LaurentPoly::var_pow("q", -2);
    for fg in corpus() {
        let c = chromatic_complex(&fg, false).unwrap();
        let mut expected: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for s in fg.states().unwrap() {
            let st = s.stats;
            let term = LaurentPoly::var_pow("q", st.h as i32)
                * b.pow((st.v + st.p + 2 * st.g) as u32)
                * r.pow(st.h as u32);
            *expected.entry(st.h).or_insert_with(LaurentPoly::zero) += &term;
            *sizes.entry(st.h).or_default() += 1 << (st.v + st.p + 2 * st.g + st.h);
        }
        for (h, poly) in expected {
            assert_eq!(c.qdim(h as i64), poly, "{fg:?} column {h}");
            assert_eq!(c.rank(h as i64), sizes[&h]);
        }
    }
}

#[test]
fn corpus_documents_round_trip() {
    for fg in corpus() {
        let doc = FatgraphDocument::parse(&FatgraphDocument::from_fatgraph(&fg).to_json()).unwrap();
        let again = FatgraphDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.fatgraph().unwrap(), fg);
    }
}

#[test]
fn theta_embeddings() {
    let theta = fathom::AbstractGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
    let all: Vec<Fatgraph> = enumerate_rotation_systems(&theta, None).unwrap().collect();
    assert_eq!(all.len(), 4);
    assert_eq!(all.iter().filter(|f| f.genus() == 0).count(), 2);
    let planar: Vec<_> = all
        .iter()
        .filter(|f| f.genus() == 0)
        .map(|f| homology_of(&chromatic_complex(f, false).unwrap()).unwrap())
        .collect();
    assert_eq!(planar[0].entries, planar[1].entries);
}

#[test]
fn mixed_sign_torus_square_is_reported() {
    let torus = Fatgraph::new(vec![vec![0, 3, 1, 2]], vec![Sign::Minus, Sign::Plus]).unwrap();
    let built = build_complex(&torus, Family::Trigraded, &BuildOptions::default());
    assert!(matches!(built, Err(Error::NotAComplex { index: 0, .. })));
    for signs in [[Sign::Minus, Sign::Minus], [Sign::Plus, Sign::Plus]] {
        let same = torus.with_signs(signs.to_vec()).unwrap();
        build_complex(&same, Family::Trigraded, &BuildOptions::default())
            .unwrap()
            .check_d_squared()
            .unwrap();
    }
}
