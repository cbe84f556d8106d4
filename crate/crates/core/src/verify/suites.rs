use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::corpus::{fatgraph_corpus, graph_code, graph_corpus, map_code, signed_corpus};
use super::uct::{coefficient_pieces, deconvolve, predict, v_power_degrees, v_power_rank};
use super::{CaseOutcome, CorpusOptions, Finding, VerificationReport, Witness};
use crate::builders::{
    build_complex, build_cube, chromatic_complex, deletion_contraction, BuildOptions, Family,
};
use crate::cube::{ChainComplex, Grading, MultiDegree};
use crate::error::{Error, Result};
use crate::fatgraph::{enumerate_rotation_systems, AbstractGraph, Fatgraph};
use crate::homology::{
    cycle_ranks, euler, first_difference, homology_of, kunneth_predict, poincare, CycleRanks,
    HomologyGroup, HomologyTable, Projection,
};
use crate::io::FatgraphDocument;
use crate::laurent::{self, LaurentPoly};

fn describe(kind: &str, opts: &CorpusOptions, n: usize) -> String {
    format!(
        "{kind} with at most {} vertices and {} edges ({n} members)",
        opts.max_vertices, opts.max_edges
    )
}

fn case_name(k: usize, tag: &str) -> String {
    if tag.is_empty() {
        format!("F{k:04}")
    } else {
        format!("F{k:04}/{tag}")
    }
}

fn error_case(case: String, fg: &Fatgraph, parameters: Value, e: &Error) -> CaseOutcome {
    CaseOutcome::fail(
        case,
        Witness::new(fg, parameters, "no error", e.to_string()),
    )
}

/// Runs `f` on every member in parallel; outcomes keep corpus order.
fn per_member<T: Sync>(
    items: &[T],
    f: impl Fn(usize, &T) -> Vec<CaseOutcome> + Sync,
) -> Vec<CaseOutcome> {
    let parts: Vec<Vec<CaseOutcome>> = items.par_iter().enumerate().map(|(k, x)| f(k, x)).collect();
    parts.into_iter().flatten().collect()
}

fn outcome(
    case: String,
    fg: &Fatgraph,
    parameters: Value,
    r: Result<Option<Witness>>,
) -> CaseOutcome {
    match r {
        Ok(w) => CaseOutcome::from_witness(case, w),
        Err(e) => error_case(case, fg, parameters, &e),
    }
}

/// The complex of `family` on `fg`, with the chromatic family normalized by [−e(F)].
pub fn family_complex(fg: &Fatgraph, family: Family, opts: &BuildOptions) -> Result<ChainComplex> {
    let c = build_complex(fg, family, opts)?;
    Ok(if family == Family::Chromatic {
        c.shift(-(fg.num_edges() as i64), MultiDegree::ZERO)
    } else {
        c
    })
}

/// The polynomial each family's Euler characteristic should equal.
pub fn matching_polynomial(fg: &Fatgraph, family: Family) -> Result<LaurentPoly> {
    match family {
        Family::Chromatic => laurent::z_poly(fg),
        Family::Restricted => laurent::restricted_br(fg),
        Family::Trigraded => laurent::r_prime_signed(fg),
        Family::HatTrigraded => laurent::r_hat_prime_signed(fg),
        Family::Khovanov => laurent::khovanov_state_sum(fg),
        Family::Hgr => laurent::chromatic_one_plus_r(&fg.underlying_graph()),
        Family::B => laurent::b_poly(fg),
    }
}

fn applies(fg: &Fatgraph, family: Family) -> bool {
    !matches!(family, Family::Khovanov | Family::B) || fg.genus() == 0
}

fn euler_witness(fg: &Fatgraph, family: Family) -> Result<Option<Witness>> {
    let params = json!({"family": family.name()});
    let h = homology_of(&family_complex(fg, family, &BuildOptions::default())?)?;
    let expected = matching_polynomial(fg, family)?;
    let chi = euler(&h);
    if !(&chi - &expected).is_zero() {
        return Ok(Some(Witness::new(
            fg,
            params,
            expected.to_string(),
            chi.to_string(),
        )));
    }
    let at_minus_one = poincare(&h, Projection::PerVariable).evaluate("t", -1)?;
    if !(&at_minus_one - &expected).is_zero() {
        return Ok(Some(Witness::new(
            fg,
            json!({"family": family.name(), "t": -1}),
            expected.to_string(),
            at_minus_one.to_string(),
        )));
    }
    Ok(None)
}

const SIGNED_FAMILIES: [Family; 3] = [Family::Trigraded, Family::HatTrigraded, Family::Khovanov];

/// Genus-0 members with every sign assignment, at most three edges.
fn signed_members(base: &[Fatgraph]) -> Vec<Fatgraph> {
    let planar: Vec<Fatgraph> = base
        .iter()
        .filter(|f| f.genus() == 0 && f.num_edges() <= 3)
        .cloned()
        .collect();
    signed_corpus(&planar)
}

fn for_families(
    corpus: &[Fatgraph],
    signed: &[Fatgraph],
    check: impl Fn(&Fatgraph, Family) -> Result<Option<Witness>> + Sync,
) -> Vec<CaseOutcome> {
    let mut cases = per_member(corpus, |k, fg| {
        Family::ALL
            .iter()
            .filter(|&&f| applies(fg, f))
            .map(|&f| {
                outcome(
                    case_name(k, f.name()),
                    fg,
                    json!({"family": f.name()}),
                    check(fg, f),
                )
            })
            .collect()
    });
    cases.extend(per_member(signed, |k, fg| {
        SIGNED_FAMILIES
            .iter()
            .filter(|&&f| applies(fg, f))
            .map(|&f| {
                outcome(
                    format!("S{k:04}/{}", f.name()),
                    fg,
                    json!({"family": f.name()}),
                    check(fg, f),
                )
            })
            .collect()
    }));
    cases
}

/// χ(H) against the matching polynomial for every family and corpus member.
pub fn check_euler(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let signed = signed_members(&corpus);
    let cases = for_families(&corpus, &signed, euler_witness);
    let label = format!(
        "{} plus {} signed genus-0 fatgraphs",
        describe("fatgraphs", opts, corpus.len()),
        signed.len()
    );
    Ok(VerificationReport::new("euler", label, cases, Vec::new()))
}

fn complex_witness(fg: &Fatgraph, family: Family) -> Result<Option<Witness>> {
    let params = json!({"family": family.name()});
    let cube = build_cube(fg, family, &BuildOptions::default())?;
    let checks = cube.check_faces().and_then(|_| {
        let c = cube.complex(0)?;
        c.check_d_squared()?;
        c.check_degree_zero()
    });
    Ok(match checks {
        Ok(()) => None,
        Err(Error::NotAComplex { index, detail }) | Err(Error::Inhomogeneous { index, detail }) => {
            let mut w = Witness::new(
                fg,
                params,
                "d∘d = 0, anti-commuting faces, degree-0 differentials",
                detail,
            );
            w.index = Some(index);
            Some(w)
        }
        Err(e) => return Err(e),
    })
}

/// Anti-commuting faces, d² = 0 and homogeneous differentials.
pub fn check_complexes(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let signed = signed_members(&corpus);
    let cases = for_families(&corpus, &signed, complex_witness);
    let label = format!(
        "{} plus {} signed genus-0 fatgraphs",
        describe("fatgraphs", opts, corpus.len()),
        signed.len()
    );
    Ok(VerificationReport::new(
        "complexes",
        label,
        cases,
        Vec::new(),
    ))
}

fn polynomial_witness(fg: &Fatgraph) -> Result<Option<Witness>> {
    laurent::z_poly(fg)?;
    laurent::restricted_br(fg)?;
    let x1 = &LaurentPoly::var("x") - &LaurentPoly::one();
    let y1 = &LaurentPoly::var("y") - &LaurentPoly::one();
    let r = laurent::bollobas_riordan(fg)?
        .evaluate("z", 1)?
        .substitute("x", &x1)?
        .substitute("y", &y1)?;
    let t = laurent::tutte(&fg.underlying_graph())?;
    Ok((!(&r - &t).is_zero()).then(|| {
        Witness::new(
            fg,
            json!({"identity": "R(F,x-1,y-1,1) = T(G,x,y)"}),
            t.to_string(),
            r.to_string(),
        )
    }))
}

/// R(F,x−1,y−1,1) = T(G,x,y) plus the two state-sum identities checked inside the polynomial constructors.
pub fn check_polynomials(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let cases = per_member(&corpus, |k, fg| {
        vec![outcome(
            case_name(k, ""),
            fg,
            json!({}),
            polynomial_witness(fg),
        )]
    });
    Ok(VerificationReport::new(
        "polynomials",
        describe("fatgraphs", opts, corpus.len()),
        cases,
        Vec::new(),
    ))
}

fn graph_witness(g: &AbstractGraph, parameters: Value, expected: String, got: String) -> Witness {
    Witness {
        fatgraph: FatgraphDocument::from_graph(g),
        parameters,
        index: None,
        degree: None,
        expected,
        got,
    }
}

/// M(G,k) against brute-force colourings for k = 1..4 on simple graphs.
pub fn check_colorings(opts: &CorpusOptions) -> Result<VerificationReport> {
    let graphs = graph_corpus(opts.max_vertices, opts.max_edges, true, false);
    let cases = per_member(&graphs, |n, g| {
        let r = (|| -> Result<Option<Witness>> {
            let m = laurent::chromatic(g)?;
            for k in 1..=4 {
                let poly = m.evaluate_all(&[("u", k as i64)])?;
                let count = laurent::colorings_oracle(g, k)?;
                if poly != count.into() {
                    return Ok(Some(graph_witness(
                        g,
                        json!({"k": k}),
                        count.to_string(),
                        poly.to_string(),
                    )));
                }
            }
            Ok(None)
        })();
        vec![match r {
            Ok(w) => CaseOutcome::from_witness(format!("G{n:04}"), w),
            Err(e) => CaseOutcome::fail(
                format!("G{n:04}"),
                graph_witness(g, json!({}), "no error".into(), e.to_string()),
            ),
        }]
    });
    Ok(VerificationReport::new(
        "colorings",
        describe("simple graphs", opts, graphs.len()),
        cases,
        Vec::new(),
    ))
}

/// Exactness and commutation of the deletion–contraction sequence for every non-loop edge.
pub fn check_delcon(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let cases = per_member(&corpus, |k, fg| {
        let mut out = Vec::new();
        for e in (0..fg.num_edges()).filter(|&e| !fg.is_loop(e)) {
            for family in [Family::Chromatic, Family::Restricted] {
                let params = json!({"edge": e, "family": family.name()});
                let r = deletion_contraction(fg, e, family)
                    .and_then(|dc| dc.failures())
                    .map(|fails| {
                        fails.first().map(|f| {
                            let mut w = Witness::new(fg, params.clone(), "exact", f.detail.clone());
                            w.index = Some(f.index);
                            w
                        })
                    });
                out.push(outcome(
                    case_name(k, &format!("e{e}/{}", family.name())),
                    fg,
                    params,
                    r,
                ));
            }
        }
        out
    });
    Ok(VerificationReport::new(
        "delcon",
        describe("fatgraphs", opts, corpus.len()),
        cases,
        Vec::new(),
    ))
}

fn table_of(fg: &Fatgraph, family: Family) -> Result<HomologyTable> {
    homology_of(&family_complex(fg, family, &BuildOptions::default())?)
}

/// Künneth with Tor at p+q = i+1, placed in cochain convention.
fn kunneth_literal(a: &HomologyTable, b: &HomologyTable) -> HomologyTable {
    let mut out = HomologyTable::new("literal", a.grading);
    for (&(i, d), g) in &a.entries {
        for (&(j, e), h) in &b.entries {
            out.add(i + j, d + e, &g.tensor(h));
            out.add(i + j + 1, d + e, &g.tor(h));
        }
    }
    out
}

/// Homology of a disjoint union against the Künneth formula, for every pair of members.
pub fn check_kunneth(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let tables: Vec<Result<(HomologyTable, HomologyTable)>> = corpus
        .par_iter()
        .map(|fg| {
            Ok((
                table_of(fg, Family::Chromatic)?,
                table_of(fg, Family::Restricted)?,
            ))
        })
        .collect();
    let tables: Vec<(HomologyTable, HomologyTable)> = tables.into_iter().collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|a| (a..corpus.len()).map(move |b| (a, b)))
        .collect();
    struct PairResult {
        case: CaseOutcome,
        tensor_ok: Option<bool>,
        literal_ok: bool,
        restricted_ok: bool,
        union: Fatgraph,
    }
    let results: Vec<PairResult> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let union = corpus[a].disjoint_union(&corpus[b]);
            let params = json!({"left": FatgraphDocument::from_fatgraph(&corpus[a]), "right": FatgraphDocument::from_fatgraph(&corpus[b])});
            let case = format!("F{a:04}+F{b:04}");
            let run = || -> Result<(Option<Witness>, Option<bool>, bool, bool)> {
                let got = table_of(&union, Family::Chromatic)?;
                let expected = kunneth_predict(&tables[a].0, &tables[b].0)?;
                let witness = Witness::from_tables(&union, params.clone(), &expected, &got);
                let literal_ok = kunneth_literal(&tables[a].0, &tables[b].0).entries == got.entries;
                let restricted = table_of(&union, Family::Restricted)?;
                let restricted_ok = kunneth_predict(&tables[a].1, &tables[b].1)?.entries == restricted.entries;
                let tensor_ok = if witness.is_some() {
                    let ca = family_complex(&corpus[a], Family::Chromatic, &BuildOptions::default())?;
                    let cb = family_complex(&corpus[b], Family::Chromatic, &BuildOptions::default())?;
                    Some(homology_of(&ca.tensor(&cb)?)?.entries == expected.entries)
                } else {
                    None
                };
                Ok((witness, tensor_ok, literal_ok, restricted_ok))
            };
            match run() {
                Ok((w, tensor_ok, literal_ok, restricted_ok)) => {
                    PairResult { case: CaseOutcome::from_witness(case, w), tensor_ok, literal_ok, restricted_ok, union }
                }
                Err(e) => PairResult { case: error_case(case, &union, params, &e), tensor_ok: None, literal_ok: false, restricted_ok: false, union },
            }
        })
        .collect();
    let mut findings = Vec::new();
    let failing: Vec<&PairResult> = results.iter().filter(|r| !r.case.passed).collect();
    if !failing.is_empty() {
        let tensor_agrees = failing.iter().filter(|r| r.tensor_ok == Some(true)).count();
        findings.push(Finding {
            kind: "tensor-complex".into(),
            detail: format!(
                "{} of {} failing pairs: the homology of the tensor product complex C(F1)⊗C(F2) matches the prediction, so the union complex is not that tensor product",
                tensor_agrees,
                failing.len()
            ),
            fatgraphs: failing.iter().take(1).map(|r| FatgraphDocument::from_fatgraph(&r.union)).collect(),
        });
    }
    let restricted_bad: Vec<&PairResult> = results.iter().filter(|r| !r.restricted_ok).collect();
    let positive_genus = restricted_bad
        .iter()
        .filter(|r| r.union.genus() > 0)
        .count();
    findings.push(Finding {
        kind: "restricted-family".into(),
        detail: format!(
            "the restricted complex satisfies the formula on {} of {} pairs; {positive_genus} of the {} exceptions have positive genus",
            results.len() - restricted_bad.len(),
            results.len(),
            restricted_bad.len()
        ),
        fatgraphs: restricted_bad.iter().take(1).map(|r| FatgraphDocument::from_fatgraph(&r.union)).collect(),
    });
    let literal_ok = results.iter().filter(|r| r.literal_ok).count();
    findings.push(Finding {
        kind: "tor-index".into(),
        detail: format!(
            "placing Tor at p+q = i−1 instead of i+1 matches on {literal_ok} of {} pairs",
            results.len()
        ),
        fatgraphs: Vec::new(),
    });
    let cases = results.into_iter().map(|r| r.case).collect();
    let label = format!(
        "unordered pairs of {}",
        describe("fatgraphs", opts, corpus.len())
    );
    Ok(VerificationReport::new("kunneth", label, cases, findings))
}

/// Which universal-coefficient decomposition to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// Chromatic from restricted.
    Prop52,
    /// Trigraded from hat-trigraded.
    Prop54,
    /// Chromatic from the Khovanov cube, genus 0.
    Thm65,
}

impl Decomposition {
    pub fn name(self) -> &'static str {
        match self {
            Decomposition::Prop52 => "prop52",
            Decomposition::Prop54 => "prop54",
            Decomposition::Thm65 => "thm65",
        }
    }

    /// (big family, small family, number of carried vertex factors).
    fn parts(self, fg: &Fatgraph) -> (Family, Family, usize) {
        match self {
            Decomposition::Prop52 => (Family::Chromatic, Family::Restricted, 0),
            Decomposition::Prop54 => (Family::Trigraded, Family::HatTrigraded, fg.num_vertices()),
            Decomposition::Thm65 => (Family::Chromatic, Family::Khovanov, fg.num_vertices()),
        }
    }
}

/// Both sides of a decomposition on one fatgraph: (assembled prediction, computed homology).
pub fn decomposition_sides(
    fg: &Fatgraph,
    kind: Decomposition,
) -> Result<(HomologyTable, HomologyTable)> {
    let (big, small, v) = kind.parts(fg);
    let opts = BuildOptions::default();
    let got = homology_of(&build_complex(fg, big, &opts)?)?;
    let sc = build_complex(fg, small, &opts)?;
    let expected = predict(
        &homology_of(&sc)?,
        &cycle_ranks(&sc)?,
        v,
        big.grading(),
        kind.name(),
    )?;
    Ok((expected, got))
}

/// Groupwise equality of a universal-coefficient decomposition in every (index, degree).
pub fn check_decomposition(
    kind: Decomposition,
    opts: &CorpusOptions,
) -> Result<VerificationReport> {
    let corpus: Vec<Fatgraph> = fatgraph_corpus(opts.max_vertices, opts.max_edges)?
        .into_iter()
        .filter(|f| kind != Decomposition::Thm65 || f.genus() == 0)
        .collect();
    let mut cases = Vec::new();
    for i in 0..=opts.max_edges {
        let torsion: Vec<String> = coefficient_pieces(i)?
            .iter()
            .filter(|(_, p)| !p.quotient.torsion.is_empty())
            .map(|(l, p)| format!("degree {l}: {}", p.quotient))
            .collect();
        let case = format!("coefficients/{i}");
        cases.push(if torsion.is_empty() {
            CaseOutcome::pass(case)
        } else {
            CaseOutcome::fail(
                case,
                Witness::new(
                    &Fatgraph::empty(0),
                    json!({"i": i}),
                    "free quotient",
                    torsion.join("; "),
                ),
            )
        });
    }
    cases.extend(per_member(&corpus, |k, fg| {
        let params = json!({"decomposition": kind.name()});
        let r = decomposition_sides(fg, kind)
            .map(|(e, g)| Witness::from_tables(fg, params.clone(), &e, &g));
        vec![outcome(case_name(k, kind.name()), fg, params, r)]
    }));
    let what = if kind == Decomposition::Thm65 {
        "genus-0 fatgraphs"
    } else {
        "fatgraphs"
    };
    Ok(VerificationReport::new(
        kind.name(),
        describe(what, opts, corpus.len()),
        cases,
        Vec::new(),
    ))
}

/// Genus-0 rotation systems of `g`, one per isomorphism class.
fn planar_embeddings(g: &AbstractGraph) -> Result<Vec<Fatgraph>> {
    let mut seen = std::collections::BTreeSet::new();
    Ok(enumerate_rotation_systems(g, Some(0))?
        .filter(|f| seen.insert(map_code(f)))
        .collect())
}

/// Poincaré polynomials of chromatic homology agree across all genus-0 embeddings of each graph.
pub fn check_embedding_invariance(opts: &CorpusOptions) -> Result<VerificationReport> {
    let graphs = graph_corpus(opts.max_vertices, opts.max_edges, false, true);
    let results: Vec<(CaseOutcome, Option<Finding>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(n, g)| {
            let case = format!("G{n:04}");
            let run = || -> Result<(Option<Witness>, Option<Finding>)> {
                let embeddings = planar_embeddings(g)?;
                let tables: Vec<HomologyTable> = embeddings.iter().map(|f| table_of(f, Family::Chromatic)).collect::<Result<_>>()?;
                let reference = poincare(&tables[0], Projection::PerVariable);
                let mut finding = None;
                for (f, t) in embeddings.iter().zip(&tables).skip(1) {
                    let p = poincare(t, Projection::PerVariable);
                    if p != reference {
                        let params = json!({"reference": FatgraphDocument::from_fatgraph(&embeddings[0])});
                        return Ok((Some(Witness::new(f, params, reference.to_string(), p.to_string())), None));
                    }
                    if finding.is_none() && t.entries != tables[0].entries {
                        finding = Some(Finding {
                            kind: "torsion".into(),
                            detail: format!("{case}: embeddings share the Poincaré polynomial but differ in torsion"),
                            fatgraphs: vec![FatgraphDocument::from_fatgraph(&embeddings[0]), FatgraphDocument::from_fatgraph(f)],
                        });
                    }
                }
                Ok((None, finding))
            };
            match run() {
                Ok((w, f)) => (CaseOutcome::from_witness(case, w), f),
                Err(e) => {
                    (CaseOutcome::fail(case.clone(), graph_witness(g, json!({}), "no error".into(), e.to_string())), None)
                }
            }
        })
        .collect();
    let (cases, findings): (Vec<CaseOutcome>, Vec<Option<Finding>>) = results.into_iter().unzip();
    let label = describe("connected graphs", opts, graphs.len());
    Ok(VerificationReport::new(
        "embedding",
        label,
        cases,
        findings.into_iter().flatten().collect(),
    ))
}

/// Vertex count and canonical edge list of an underlying graph.
type GraphKey = (usize, Vec<(usize, usize)>);

/// Pairs of fatgraphs with the same underlying graph, genus 0 and genus 1, and different chromatic homology.
pub fn genus_witnesses(opts: &CorpusOptions) -> Result<Vec<(Fatgraph, Fatgraph)>> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let mut groups: BTreeMap<GraphKey, Vec<&Fatgraph>> = BTreeMap::new();
    for fg in &corpus {
        let g = fg.underlying_graph();
        groups.entry((g.n, graph_code(&g))).or_default().push(fg);
    }
    let pairs: Vec<(&Fatgraph, &Fatgraph)> = groups
        .values()
        .flat_map(|members| {
            let zero: Vec<&Fatgraph> = members.iter().copied().filter(|f| f.genus() == 0).collect();
            let one: Vec<&Fatgraph> = members.iter().copied().filter(|f| f.genus() == 1).collect();
            zero.into_iter()
                .flat_map(move |a| one.clone().into_iter().map(move |b| (a, b)))
        })
        .collect();
    let found: Vec<Option<(Fatgraph, Fatgraph)>> =
        pairs
            .par_iter()
            .map(|&(a, b)| {
                Ok((table_of(a, Family::Chromatic)?.entries
                    != table_of(b, Family::Chromatic)?.entries)
                    .then(|| (a.clone(), b.clone())))
            })
            .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Pairs of fatgraphs with equal Z(F,q) and different chromatic homology; pairs with Z ≠ 0 and
/// non-isomorphic underlying graphs come first.
pub fn stronger_witnesses(opts: &CorpusOptions) -> Result<Vec<(Fatgraph, Fatgraph)>> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let data: Vec<(String, HomologyTable, GraphKey)> = corpus
        .par_iter()
        .map(|fg| {
            let g = fg.underlying_graph();
            Ok((
                laurent::z_poly(fg)?.to_string(),
                table_of(fg, Family::Chromatic)?,
                (g.n, graph_code(&g)),
            ))
        })
        .collect::<Result<_>>()?;
    let mut ranked = Vec::new();
    for a in 0..corpus.len() {
        for b in a + 1..corpus.len() {
            if data[a].0 == data[b].0 && data[a].1.entries != data[b].1.entries {
                let rank = (data[a].0 == "0", data[a].2 == data[b].2);
                ranked.push((rank, a, b));
            }
        }
    }
    ranked.sort();
    Ok(ranked
        .into_iter()
        .map(|(_, a, b)| (corpus[a].clone(), corpus[b].clone()))
        .collect())
}

fn search_report(
    suite: &str,
    corpus: String,
    what: &str,
    pairs: &[(Fatgraph, Fatgraph)],
) -> VerificationReport {
    let case = if pairs.is_empty() {
        CaseOutcome::fail(
            "search",
            Witness::new(
                &Fatgraph::empty(0),
                json!({}),
                format!("at least one {what}"),
                "search exhausted",
            ),
        )
    } else {
        CaseOutcome::pass("search")
    };
    let findings = pairs
        .iter()
        .take(5)
        .enumerate()
        .map(|(n, (a, b))| Finding {
            kind: what.into(),
            detail: format!("witness {} of {}", n + 1, pairs.len()),
            fatgraphs: vec![
                FatgraphDocument::from_fatgraph(a),
                FatgraphDocument::from_fatgraph(b),
            ],
        })
        .collect();
    VerificationReport::new(suite, corpus, vec![case], findings)
}

/// Finds a graph whose genus-0 and genus-1 embeddings have different homology.
pub fn check_genus_sensitivity(opts: &CorpusOptions) -> Result<VerificationReport> {
    let pairs = genus_witnesses(opts)?;
    Ok(search_report(
        "genus",
        describe(
            "fatgraphs",
            opts,
            fatgraph_corpus(opts.max_vertices, opts.max_edges)?.len(),
        ),
        "genus pair",
        &pairs,
    ))
}

/// Finds fatgraphs with equal Z(F,q) and different homology.
pub fn search_stronger_than_chromatic(opts: &CorpusOptions) -> Result<VerificationReport> {
    let pairs = stronger_witnesses(opts)?;
    Ok(search_report(
        "stronger",
        describe(
            "fatgraphs",
            opts,
            fatgraph_corpus(opts.max_vertices, opts.max_edges)?.len(),
        ),
        "equal-polynomial pair",
        &pairs,
    ))
}

/// The 5 edge permutations used for member `k`.
pub fn labeling_permutations(seed: u64, k: usize, edges: usize) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..5)
        .map(|_| {
            let mut p: Vec<usize> = (0..edges).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect()
}

const LABELED_FAMILIES: [Family; 3] = [Family::Chromatic, Family::Restricted, Family::Trigraded];

/// Homology is unchanged by edge relabelings and by reversing the boundary correspondence.
pub fn check_labeling_and_correspondence_invariance(
    opts: &CorpusOptions,
) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let cases = per_member(&corpus, |k, fg| {
        let perms = labeling_permutations(opts.seed, k, fg.num_edges());
        LABELED_FAMILIES
            .iter()
            .map(|&family| {
                let params = json!({"family": family.name(), "seed": opts.seed});
                let run = || -> Result<Option<Witness>> {
                    let reference = table_of(fg, family)?;
                    for p in &perms {
                        let relabeled = fg.relabel_edges(p)?;
                        let t = table_of(&relabeled, family)?;
                        if let Some(w) = Witness::from_tables(
                            &relabeled,
                            json!({"family": family.name(), "permutation": p}),
                            &reference,
                            &t,
                        ) {
                            return Ok(Some(w));
                        }
                    }
                    let reversed = BuildOptions {
                        reverse_boundary: true,
                        ..BuildOptions::default()
                    };
                    let t = homology_of(&family_complex(fg, family, &reversed)?)?;
                    Ok(Witness::from_tables(
                        fg,
                        json!({"family": family.name(), "reverse_boundary": true}),
                        &reference,
                        &t,
                    ))
                };
                outcome(case_name(k, family.name()), fg, params, run())
            })
            .collect()
    });
    Ok(VerificationReport::new(
        "labeling",
        describe("fatgraphs", opts, corpus.len()),
        cases,
        Vec::new(),
    ))
}

fn slice(h: &HomologyTable, keep: impl Fn(i64, MultiDegree) -> bool) -> HomologyTable {
    let mut out = HomologyTable::new(h.label.clone(), h.grading);
    for (&(i, d), g) in &h.entries {
        if keep(i, d) {
            out.add(i, d, g);
        }
    }
    out
}

fn times_v(
    entries: impl IntoIterator<Item = ((i64, MultiDegree), HomologyGroup)>,
    v: usize,
    grading: Grading,
) -> HomologyTable {
    let mut out = HomologyTable::new("", grading);
    for ((i, d), g) in entries {
        for q in v_power_degrees(v) {
            out.add(i, d + MultiDegree::q(q), &g.times(v_power_rank(v, q)));
        }
    }
    out
}

/// The r₋₂ ↦ 0 slice, the extremal slice, and the total-degree projection on one all-negative fatgraph.
///
/// Also reports whether the slice equals ⊕(ĤB ⊕ Z)⊗V read with Z as an extra summand.
pub fn recovery_unsigned(fg: &Fatgraph) -> Result<(Option<Witness>, bool)> {
    let opts = BuildOptions::default();
    let big = homology_of(&build_complex(fg, Family::Trigraded, &opts)?)?;
    let hat = build_complex(fg, Family::HatTrigraded, &opts)?;
    let hat_h = homology_of(&hat)?;
    let hat_z = cycle_ranks(&hat)?;
    let v = fg.num_vertices();
    let g = Grading::QRS;

    let a_got = slice(&big, |_, d| d.0[2] == 0);
    let a_expected = times_v(hat_h.entries.iter().map(|(&k, x)| (k, x.clone())), v, g);
    let with_cycles = times_v(
        hat_z
            .iter()
            .map(|(&k, &z)| (k, hat_h.get(k.0, k.1).direct_sum(&HomologyGroup::free(z)))),
        v,
        g,
    );
    let literal = with_cycles.entries == a_got.entries;
    if let Some(w) = Witness::from_tables(fg, json!({"step": "r-2 -> 0"}), &a_expected, &a_got) {
        return Ok((Some(w), literal));
    }

    let b_got = slice(&big, |i, d| d.0[2] == -2 * i as i32);
    let b_expected = times_v(
        hat_z.iter().map(|(&(i, d), &z)| {
            (
                (i, d + MultiDegree([0, 0, -2 * i as i32])),
                HomologyGroup::free(z),
            )
        }),
        v,
        g,
    );
    if let Some(w) =
        Witness::from_tables(fg, json!({"step": "extremal slice"}), &b_expected, &b_got)
    {
        return Ok((Some(w), literal));
    }

    let projected = big.map_keys(|i, d| (i, MultiDegree::q(d.total())));
    let chromatic = homology_of(&chromatic_complex(fg, false)?)?;
    let mut w = None;
    if let Some((i, d, x, y)) = first_difference(
        &chromatic,
        &HomologyTable {
            grading: Grading::Q,
            ..projected
        },
    ) {
        w = Some(
            Witness::new(
                fg,
                json!({"step": "total-degree projection"}),
                x.to_string(),
                y.to_string(),
            )
            .at(i, d, 1),
        );
    }
    Ok((w, literal))
}

/// Khovanov homology and cycle ranks of a signed genus-0 fatgraph, extracted from its trigraded homology.
pub fn recover_khovanov(fg: &Fatgraph) -> Result<(HomologyTable, CycleRanks)> {
    let big = homology_of(&build_complex(
        fg,
        Family::Trigraded,
        &BuildOptions::default(),
    )?)?;
    let v = fg.num_vertices();
    let recovered = deconvolve(&slice(&big, |_, d| d.0[2] == 0), v).ok_or_else(|| {
        Error::IdentityMismatch("r₋₂ ↦ 0 slice is not a multiple of V^{⊗v}".into())
    })?;
    let extremal =
        deconvolve(&slice(&big, |i, d| d.0[2] == -2 * i as i32), v).ok_or_else(|| {
            Error::IdentityMismatch("extremal slice is not a multiple of V^{⊗v}".into())
        })?;
    let table = recovered.map_keys(|i, d| (i, MultiDegree::q(d.0[0])));
    let table = HomologyTable {
        label: "recovered".into(),
        grading: Grading::Q,
        entries: table.entries,
    };
    let mut cycles = BTreeMap::new();
    for (&(i, d), g) in &extremal.entries {
        if !g.torsion.is_empty() {
            return Err(Error::IdentityMismatch(format!(
                "torsion {g} in the extremal slice at index {i}"
            )));
        }
        cycles.insert((i, MultiDegree::q(d.0[0])), g.free);
    }
    Ok((table, cycles))
}

/// The two extraction steps on the all-negative corpus and Khovanov recovery on signed genus-0 fatgraphs.
pub fn check_recovery_thm55(opts: &CorpusOptions) -> Result<VerificationReport> {
    let corpus = fatgraph_corpus(opts.max_vertices, opts.max_edges)?;
    let signed = signed_corpus(
        &corpus
            .iter()
            .filter(|f| f.genus() == 0)
            .cloned()
            .collect::<Vec<_>>(),
    );
    let unsigned: Vec<(CaseOutcome, bool)> = corpus
        .par_iter()
        .enumerate()
        .map(|(k, fg)| match recovery_unsigned(fg) {
            Ok((w, literal)) => (
                CaseOutcome::from_witness(case_name(k, "extraction"), w),
                literal,
            ),
            Err(e) => (
                error_case(case_name(k, "extraction"), fg, json!({}), &e),
                false,
            ),
        })
        .collect();
    let literal = unsigned.iter().filter(|(_, l)| *l).count();
    let total = unsigned.len();
    let mut cases: Vec<CaseOutcome> = unsigned.into_iter().map(|(c, _)| c).collect();
    cases.extend(per_member(&signed, |k, fg| {
        let params = json!({"step": "khovanov recovery"});
        let run = || -> Result<Option<Witness>> {
            let (table, cycles) = recover_khovanov(fg)?;
            let kc = build_complex(fg, Family::Khovanov, &BuildOptions::default())?;
            let direct = homology_of(&kc)?;
            if let Some(w) = Witness::from_tables(fg, params.clone(), &direct, &table) {
                return Ok(Some(w));
            }
            let direct_cycles: CycleRanks = cycle_ranks(&kc)?
                .into_iter()
                .filter(|&(_, z)| z > 0)
                .collect();
            Ok((direct_cycles != cycles).then(|| {
                Witness::new(
                    fg,
                    json!({"step": "cycle recovery"}),
                    format!("{direct_cycles:?}"),
                    format!("{cycles:?}"),
                )
            }))
        };
        vec![outcome(
            format!("S{k:04}/khovanov"),
            fg,
            json!({"step": "khovanov recovery"}),
            run(),
        )]
    }));
    let findings = vec![Finding {
        kind: "summand-reading".into(),
        detail: format!(
            "the r₋₂ ↦ 0 slice equals ⊕ĤB⊗V on every member; reading the summand as ĤB ⊕ Z instead matches on {literal} of {total}"
        ),
        fatgraphs: Vec::new(),
    }];
    let label = format!(
        "{} plus {} signed genus-0 fatgraphs",
        describe("fatgraphs", opts, corpus.len()),
        signed.len()
    );
    Ok(VerificationReport::new("recovery", label, cases, findings))
}
