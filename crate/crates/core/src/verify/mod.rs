//! Mechanical checks of structural identities over exhaustive corpora.

pub mod corpus;
mod suites;
pub mod uct;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::cube::MultiDegree;
use crate::error::{Error, Result};
use crate::fatgraph::Fatgraph;
use crate::homology::{first_difference, HomologyTable};
use crate::io::FatgraphDocument;

pub use suites::*;

/// Everything needed to re-run one failing case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub fatgraph: FatgraphDocument,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<Vec<i32>>,
    pub expected: String,
    pub got: String,
}

impl Witness {
    pub fn new(
        fg: &Fatgraph,
        parameters: Value,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Witness {
            fatgraph: FatgraphDocument::from_fatgraph(fg),
            parameters,
            index: None,
            degree: None,
            expected: expected.into(),
            got: got.into(),
        }
    }

    /// Witness for the first entry where `expected` and `got` disagree, or `None` if they agree.
    pub fn from_tables(
        fg: &Fatgraph,
        parameters: Value,
        expected: &HomologyTable,
        got: &HomologyTable,
    ) -> Option<Self> {
        let (i, d, x, y) = first_difference(expected, got)?;
        let a = expected.grading.arity();
        Some(Witness {
            index: Some(i),
            degree: Some(d.0[..a].to_vec()),
            ..Witness::new(fg, parameters, x.to_string(), y.to_string())
        })
    }

    pub fn at(mut self, index: i64, degree: MultiDegree, arity: usize) -> Self {
        self.index = Some(index);
        self.degree = Some(degree.0[..arity].to_vec());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CaseOutcome {
    pub fn pass(case: impl Into<String>) -> Self {
        CaseOutcome {
            case: case.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(case: impl Into<String>, witness: Witness) -> Self {
        CaseOutcome {
            case: case.into(),
            passed: false,
            witness: Some(witness),
        }
    }

    pub fn from_witness(case: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => CaseOutcome::pass(case),
            Some(w) => CaseOutcome::fail(case, w),
        }
    }
}

/// Observations that do not decide pass/fail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub kind: String,
    pub detail: String,
    pub fatgraphs: Vec<FatgraphDocument>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub corpus: String,
    pub cases: Vec<CaseOutcome>,
    pub findings: Vec<Finding>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        corpus: impl Into<String>,
        cases: Vec<CaseOutcome>,
        findings: Vec<Finding>,
    ) -> Self {
        let passed = cases.iter().filter(|c| c.passed).count();
        let summary = Summary {
            total: cases.len(),
            passed,
            failed: cases.len() - passed,
        };
        VerificationReport {
            suite: suite.into(),
            corpus: corpus.into(),
            cases,
            findings,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Size limits and seed of a generated corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusOptions {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Euler,
    Complexes,
    Polynomials,
    Colorings,
    Delcon,
    Kunneth,
    Prop52,
    Prop54,
    Thm65,
    Embedding,
    Genus,
    Stronger,
    Labeling,
    Recovery,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Euler,
        Suite::Complexes,
        Suite::Polynomials,
        Suite::Colorings,
        Suite::Delcon,
        Suite::Kunneth,
        Suite::Prop52,
        Suite::Prop54,
        Suite::Thm65,
        Suite::Embedding,
        Suite::Genus,
        Suite::Stronger,
        Suite::Labeling,
        Suite::Recovery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Euler => "euler",
            Suite::Complexes => "complexes",
            Suite::Polynomials => "polynomials",
            Suite::Colorings => "colorings",
            Suite::Delcon => "delcon",
            Suite::Kunneth => "kunneth",
            Suite::Prop52 => "prop52",
            Suite::Prop54 => "prop54",
            Suite::Thm65 => "thm65",
            Suite::Embedding => "embedding",
            Suite::Genus => "genus",
            Suite::Stronger => "stronger",
            Suite::Labeling => "labeling",
            Suite::Recovery => "recovery",
        }
    }

    /// Corpus limits used when none are given.
    pub fn default_corpus(self) -> CorpusOptions {
        let (max_vertices, max_edges) = match self {
            Suite::Euler | Suite::Complexes | Suite::Polynomials => (3, 4),
            Suite::Colorings => (6, 8),
            Suite::Kunneth => (3, 2),
            Suite::Embedding => (5, 4),
            _ => (3, 3),
        };
        CorpusOptions {
            max_vertices,
            max_edges,
            seed: 0,
        }
    }

    pub fn run(self, opts: &CorpusOptions) -> Result<VerificationReport> {
        match self {
            Suite::Euler => check_euler(opts),
            Suite::Complexes => check_complexes(opts),
            Suite::Polynomials => check_polynomials(opts),
            Suite::Colorings => check_colorings(opts),
            Suite::Delcon => check_delcon(opts),
            Suite::Kunneth => check_kunneth(opts),
            Suite::Prop52 => check_decomposition(Decomposition::Prop52, opts),
            Suite::Prop54 => check_decomposition(Decomposition::Prop54, opts),
            Suite::Thm65 => check_decomposition(Decomposition::Thm65, opts),
            Suite::Embedding => check_embedding_invariance(opts),
            Suite::Genus => check_genus_sensitivity(opts),
            Suite::Stronger => search_stronger_than_chromatic(opts),
            Suite::Labeling => check_labeling_and_correspondence_invariance(opts),
            Suite::Recovery => check_recovery_thm55(opts),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Parse(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}
