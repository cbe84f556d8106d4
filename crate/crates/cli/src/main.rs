use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use fathom::builders::{
    any_embedding, build_complex, max_generators_from_env, BuildOptions, Family, MAX_GENERATORS_VAR,
};
use fathom::cube::{ChainComplex, MultiDegree};
use fathom::fatgraph::{
    enumerate_rotation_systems_capped, DEFAULT_MAX_EDGES, DEFAULT_MAX_ROTATION_SYSTEMS,
};
use fathom::homology::{euler, homology_of, khovanov_reindex, poincare, Projection};
use fathom::io::FatgraphDocument;
use fathom::laurent;
use fathom::verify::{CorpusOptions, Suite};
use fathom::{AbstractGraph, Fatgraph, LaurentPoly};

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}; raise it with --max-generators or {MAX_GENERATORS_VAR}")]
    GeneratorCap(fathom::Error),
    #[error("{0}; raise it with --max-edges")]
    EdgeCap(fathom::Error),
    #[error("{0}; raise it with --max-rotation-systems")]
    RotationCap(fathom::Error),
    #[error("{0}")]
    Core(fathom::Error),
}

impl From<fathom::Error> for CliError {
    fn from(e: fathom::Error) -> Self {
        match e {
            fathom::Error::TooManyGenerators { .. } => CliError::GeneratorCap(e),
            fathom::Error::TooManyEdges { .. } => CliError::EdgeCap(e),
            fathom::Error::TooManyRotationSystems { .. } => CliError::RotationCap(e),
            e => CliError::Core(e),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Polynomials, chain complexes and integral homology of fatgraphs.
#[derive(Debug, Parser)]
#[command(name = "fathom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a polynomial invariant of the input.
    Poly {
        which: PolyKind,
        /// JSON document; `-` reads standard input.
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print the homology table of one complex family.
    Homology {
        family: FamilyArg,
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Shift the chromatic complex by −e(F), or reindex khovanov with --nminus/--nplus.
        #[arg(long)]
        normalized: bool,
        /// Negative crossings of the associated link (khovanov).
        #[arg(long, allow_negative_numbers = true)]
        nminus: Option<i64>,
        /// Positive crossings of the associated link (khovanov).
        #[arg(long, allow_negative_numbers = true)]
        nplus: Option<i64>,
        /// Print Σ tⁱ qdim(Hⁱ) instead of the table.
        #[arg(long)]
        poincare: bool,
        /// Print Σ (−1)ⁱ qdim(Hⁱ) instead of the table.
        #[arg(long)]
        euler: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Run a verification suite over a generated corpus and print its report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the rotation systems of a graph.
    Embeddings {
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Keep only embeddings of this genus.
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_ROTATION_SYSTEMS)]
        max_rotation_systems: u128,
    },
}

#[derive(Debug, Args)]
struct Caps {
    /// Largest complex to build [default: $FATHOM_MAX_GENERATORS or 4194304].
    #[arg(long)]
    max_generators: Option<u128>,
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
}

impl Caps {
    fn build_options(&self) -> Result<BuildOptions> {
        let max_generators = match self.max_generators {
            Some(n) => n,
            None => max_generators_from_env()?,
        };
        Ok(BuildOptions {
            max_generators,
            max_edges: self.max_edges,
            reverse_boundary: false,
        })
    }

    fn check_edges(&self, edges: usize) -> Result<()> {
        if edges > self.max_edges {
            return Err(fathom::Error::TooManyEdges {
                edges,
                cap: self.max_edges,
            }
            .into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    Tutte,
    Chromatic,
    Br,
    Z,
    Rhat,
    Rprime,
    Rhatprime,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Chromatic,
    Rbr,
    Tri,
    Khovanov,
    Hgr,
    B,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Chromatic => Family::Chromatic,
            FamilyArg::Rbr => Family::Restricted,
            FamilyArg::Tri => Family::Trigraded,
            FamilyArg::Khovanov => Family::Khovanov,
            FamilyArg::Hgr => Family::Hgr,
            FamilyArg::B => Family::B,
        }
    }
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: fathom::Error| e.to_string())
}

fn read_document(input: &PathBuf) -> Result<FatgraphDocument> {
    let mut text = String::new();
    let path = input.display().to_string();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Io {
                path: "standard input".into(),
                source,
            })?;
    } else {
        text = std::fs::read_to_string(input).map_err(|source| CliError::Io { path, source })?;
    }
    Ok(FatgraphDocument::parse(&text)?)
}

fn polynomial_json(which: PolyKind, p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(exps, c)| {
            let coefficient = i64::try_from(c).map_or_else(|_| json!(c.to_string()), |c| json!(c));
            json!({"exponents": exps, "coefficient": coefficient})
        })
        .collect();
    let name = which
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    json!({"polynomial": name, "variables": p.vars(), "text": p.to_string(), "terms": terms})
}

fn cmd_poly(which: PolyKind, input: &PathBuf, as_json: bool, caps: &Caps) -> Result<String> {
    let doc = read_document(input)?;
    let p = match which {
        PolyKind::Tutte | PolyKind::Chromatic => {
            let g = doc.graph()?;
            caps.check_edges(g.num_edges())?;
            if which == PolyKind::Tutte {
                laurent::tutte(&g)?
            } else {
                laurent::chromatic(&g)?
            }
        }
        _ => {
            let fg = doc.fatgraph()?;
            caps.check_edges(fg.num_edges())?;
            match which {
                PolyKind::Br => laurent::bollobas_riordan(&fg)?,
                PolyKind::Z => laurent::z_poly(&fg)?,
                PolyKind::Rhat => laurent::restricted_br(&fg)?,
                PolyKind::Rprime => laurent::r_prime_signed(&fg)?,
                PolyKind::Rhatprime => laurent::r_hat_prime_signed(&fg)?,
                _ => laurent::b_poly(&fg)?,
            }
        }
    };
    Ok(if as_json {
        serde_json::to_string_pretty(&polynomial_json(which, &p)).expect("json")
    } else {
        p.to_string()
    })
}

struct HomologyRequest {
    family: FamilyArg,
    normalized: bool,
    nminus: Option<i64>,
    nplus: Option<i64>,
    poincare: bool,
    euler: bool,
}

fn input_fatgraph(doc: &FatgraphDocument, family: FamilyArg) -> Result<Fatgraph> {
    match (doc, family) {
        (FatgraphDocument::Graph { .. }, FamilyArg::Hgr) => Ok(any_embedding(&doc.graph()?)),
        (FatgraphDocument::Graph { .. }, _) => Err(CliError::Usage(
            "this family needs a fatgraph document with rotations; only hgr accepts a graph".into(),
        )),
        _ => Ok(doc.fatgraph()?),
    }
}

fn cmd_homology(req: &HomologyRequest, input: &PathBuf, caps: &Caps) -> Result<String> {
    let doc = read_document(input)?;
    let fg = input_fatgraph(&doc, req.family)?;
    caps.check_edges(fg.num_edges())?;
    let reindex = req.nminus.is_some() || req.nplus.is_some();
    if reindex && req.family != FamilyArg::Khovanov {
        return Err(CliError::Usage(
            "--nminus and --nplus apply only to khovanov".into(),
        ));
    }
    let mut complex: ChainComplex =
        build_complex(&fg, req.family.family(), &caps.build_options()?)?;
    if req.normalized && req.family == FamilyArg::Chromatic {
        complex = complex.shift(-(fg.num_edges() as i64), MultiDegree::ZERO);
    }
    let mut table = homology_of(&complex)?;
    match (req.family, req.normalized || reindex) {
        (FamilyArg::Chromatic, _) | (_, false) => {}
        (FamilyArg::Khovanov, true) => match (req.nminus, req.nplus) {
            (Some(n_minus), Some(n_plus)) => table = khovanov_reindex(&table, n_minus, n_plus),
            _ => {
                return Err(CliError::Usage(
                    "khovanov normalization needs both --nminus and --nplus".into(),
                ))
            }
        },
        (_, true) => {
            return Err(CliError::Usage(
                "--normalized applies only to chromatic and khovanov".into(),
            ))
        }
    }
    if req.poincare || req.euler {
        let mut lines = Vec::new();
        if req.poincare {
            lines.push(poincare(&table, Projection::PerVariable).to_string());
        }
        if req.euler {
            lines.push(euler(&table).to_string());
        }
        return Ok(lines.join("\n"));
    }
    Ok(serde_json::to_string_pretty(&table.to_json()).expect("json"))
}

fn cmd_verify(
    suite: Suite,
    max_edges: Option<usize>,
    max_vertices: Option<usize>,
    seed: u64,
) -> Result<(String, bool)> {
    let defaults = suite.default_corpus();
    let opts = CorpusOptions {
        max_vertices: max_vertices.unwrap_or(defaults.max_vertices),
        max_edges: max_edges.unwrap_or(defaults.max_edges),
        seed,
    };
    let report = suite.run(&opts)?;
    Ok((
        serde_json::to_string_pretty(&report.to_json()).expect("json"),
        report.all_passed(),
    ))
}

fn cmd_embeddings(input: &PathBuf, genus: Option<usize>, cap: u128) -> Result<String> {
    let g: AbstractGraph = read_document(input)?.graph()?;
    let docs: Vec<String> = enumerate_rotation_systems_capped(&g, genus, cap)?
        .map(|fg| FatgraphDocument::from_fatgraph(&fg).to_json())
        .collect();
    if docs.is_empty() {
        return Ok("[]".into());
    }
    Ok(format!("[\n  {}\n]", docs.join(",\n  ")))
}

fn run(cli: Cli) -> Result<(String, bool)> {
    match cli.command {
        Command::Poly {
            which,
            input,
            json,
            caps,
        } => Ok((cmd_poly(which, &input, json, &caps)?, true)),
        Command::Homology {
            family,
            input,
            normalized,
            nminus,
            nplus,
            poincare,
            euler,
            caps,
        } => {
            let req = HomologyRequest {
                family,
                normalized,
                nminus,
                nplus,
                poincare,
                euler,
            };
            Ok((cmd_homology(&req, &input, &caps)?, true))
        }
        Command::Verify {
            suite,
            max_edges,
            max_vertices,
            seed,
        } => cmd_verify(suite, max_edges, max_vertices, seed),
        Command::Embeddings {
            input,
            genus,
            max_rotation_systems,
        } => Ok((cmd_embeddings(&input, genus, max_rotation_systems)?, true)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, passed)) => {
            println!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
