use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn fathom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fathom"))
        .args(args)
        .env_remove("FATHOM_MAX_GENERATORS")
        .output()
        .unwrap()
}

fn fathom_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fathom"))
        .args(args)
        .env_remove("FATHOM_MAX_GENERATORS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str, content: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("FATHOM_BLESS").is_some() {
        std::fs::write(&path, content).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with FATHOM_BLESS=1", path.display()));
    assert_eq!(content, expected, "{} differs", path.display());
}

/// T(G) by deletion and contraction on an edge list.
fn tutte_oracle(n: usize, edges: &[(usize, usize)]) -> BTreeMap<(i64, i64), i64> {
    fn connected(n: usize, edges: &[(usize, usize)], a: usize, b: usize) -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for &(x, y) in edges {
                for (p, q) in [(x, y), (y, x)] {
                    if p == v && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen[b]
    }
    fn shift(m: BTreeMap<(i64, i64), i64>, dx: i64, dy: i64) -> BTreeMap<(i64, i64), i64> {
        m.into_iter()
            .map(|((x, y), c)| ((x + dx, y + dy), c))
            .collect()
    }
    let Some((&(a, b), rest)) = edges.split_last() else {
        return BTreeMap::from([((0, 0), 1)]);
    };
    let contracted: Vec<(usize, usize)> = rest
        .iter()
        .map(|&(x, y)| (if x == b { a } else { x }, if y == b { a } else { y }))
        .collect();
    if a == b {
        return shift(tutte_oracle(n, rest), 0, 1);
    }
    if !connected(n, rest, a, b) {
        return shift(tutte_oracle(n, &contracted), 1, 0);
    }
    let mut sum = tutte_oracle(n, rest);
    for (k, c) in tutte_oracle(n, &contracted) {
        *sum.entry(k).or_default() += c;
    }
    sum.retain(|_, c| *c != 0);
    sum
}

#[test]
fn poly_examples() {
    assert_eq!(
        stdout(&fathom(&["poly", "z", &data("isolated_vertex.json")])),
        "q^2+2+q^-2\n"
    );
    assert_eq!(
        stdout(&fathom(&["poly", "chromatic", &data("planar_loop.json")])),
        "0\n"
    );
    golden(
        "poly_tutte_theta.json",
        &stdout(&fathom(&[
            "poly",
            "tutte",
            &data("theta_graph.json"),
            "--json",
        ])),
    );
}

#[test]
fn tutte_matches_deletion_contraction() {
    let graphs: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (2, vec![(0, 1), (0, 1), (0, 1)]),
        (3, vec![(0, 1), (1, 2), (2, 0)]),
        (1, vec![(0, 0), (0, 0)]),
        (4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        (3, vec![(0, 1), (0, 1), (1, 2), (2, 2)]),
    ];
    for (n, edges) in graphs {
        let doc = serde_json::json!({"graph": {"n": n, "edges": edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>()}});
        let v: Value = serde_json::from_str(&stdout(&fathom_stdin(
            &["poly", "tutte", "--json"],
            &doc.to_string(),
        )))
        .unwrap();
        let vars: Vec<&str> = v["variables"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap())
            .collect();
        let mut got = BTreeMap::new();
        for t in v["terms"].as_array().unwrap() {
            let e: Vec<i64> = t["exponents"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect();
            let at = |name: &str| vars.iter().position(|&x| x == name).map_or(0, |k| e[k]);
            got.insert((at("x"), at("y")), t["coefficient"].as_i64().unwrap());
        }
        assert_eq!(got, tutte_oracle(n, &edges), "{doc}");
    }
}

#[test]
fn homology_examples() {
    let loop_table = stdout(&fathom(&[
        "homology",
        "chromatic",
        &data("planar_loop.json"),
        "--normalized",
    ]));
    golden("homology_chromatic_planar_loop.json", &loop_table);
    assert_eq!(
        stdout(&fathom(&[
            "homology",
            "chromatic",
            &data("planar_loop.json"),
            "--normalized",
            "--poincare"
        ])),
        "q+q*t^-1+2*q^-1+2*q^-1*t^-1+q^-3+q^-3*t^-1\n"
    );
    let kh = stdout(&fathom(&[
        "homology",
        "khovanov",
        &data("single_edge.json"),
    ]));
    golden("homology_khovanov_single_edge.json", &kh);
    let v: Value = serde_json::from_str(&kh).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert!(entries
        .iter()
        .all(|e| e["index"] == 1 && e["torsion"].as_array().unwrap().is_empty()));
    assert_eq!(
        entries
            .iter()
            .map(|e| e["free"].as_u64().unwrap())
            .sum::<u64>(),
        2
    );
}

#[test]
fn euler_flag_matches_poly() {
    let pairs = [
        (vec!["chromatic", "--normalized"], "z"),
        (vec!["rbr"], "rhat"),
        (vec!["tri"], "rprime"),
        (vec!["b"], "b"),
    ];
    for input in [
        "isolated_vertex.json",
        "single_edge.json",
        "planar_loop.json",
        "theta_planar.json",
    ] {
        for (family, poly) in &pairs {
            let mut args = vec!["homology", family[0]];
            args.extend(&family[1..]);
            let path = data(input);
            args.extend([path.as_str(), "--euler"]);
            let chi = stdout(&fathom(&args));
            assert_eq!(
                chi,
                stdout(&fathom(&["poly", poly, &path])),
                "{input} {family:?}"
            );
        }
    }
}

#[test]
fn khovanov_normalization_flags() {
    let out = fathom(&[
        "homology",
        "khovanov",
        &data("single_edge.json"),
        "--normalized",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&fathom(&[
        "homology",
        "khovanov",
        &data("single_edge.json"),
        "--nminus",
        "1",
        "--nplus",
        "0",
    ])))
    .unwrap();
    assert!(v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["index"] == 0));
}

#[test]
fn genus_is_checked() {
    let torus = r#"{"vertices":[{"id":0,"rotation":[0,2,1,3]}],"edges":[{"id":0,"halves":[0,1]},{"id":1,"halves":[2,3]}]}"#;
    let out = fathom_stdin(&["homology", "khovanov"], torus);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genus"));
}

#[test]
fn embeddings_examples() {
    let count = |args: &[&str]| {
        serde_json::from_str::<Vec<Value>>(&stdout(&fathom(args)))
            .unwrap()
            .len()
    };
    let theta = data("theta_graph.json");
    assert_eq!(count(&["embeddings", &theta]), 4);
    assert_eq!(count(&["embeddings", &theta, "--genus", "0"]), 2);
    assert_eq!(count(&["embeddings", &data("triangle.json")]), 1);
    assert!(count(&["embeddings", &data("two_loop_vertex.json"), "--genus", "1"]) > 0);
    golden(
        "embeddings_theta.json",
        &stdout(&fathom(&["embeddings", &theta])),
    );
}

fn verify(args: &[&str]) -> (Option<i32>, Value) {
    let out = fathom(args);
    (
        out.status.code(),
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap(),
    )
}

#[test]
fn verify_suites_pass() {
    for args in [
        ["verify", "euler", "--max-edges", "3"],
        ["verify", "delcon", "--max-edges", "3"],
        ["verify", "embedding", "--max-edges", "4"],
    ] {
        let (code, report) = verify(&args);
        assert_eq!(code, Some(0), "{args:?}");
        assert_eq!(report["summary"]["failed"], 0);
        assert!(report["summary"]["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn verify_failure_exits_nonzero_with_witness() {
    let (code, report) = verify(&["verify", "kunneth", "--max-edges", "1"]);
    assert_eq!(code, Some(1));
    let failed = report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["passed"] == false)
        .unwrap();
    assert!(failed["witness"]["fatgraph"]["vertices"].is_array());
}

#[test]
fn verify_is_deterministic() {
    let a = fathom(&["verify", "labeling", "--max-edges", "2", "--seed", "7"]);
    let b = fathom(&["verify", "labeling", "--max-edges", "2", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(fathom(&["verify", "nonsense"]).status.code() == Some(2));
}

#[test]
fn generator_cap_from_environment_and_flag() {
    let path = data("single_edge.json");
    let capped = Command::new(env!("CARGO_BIN_EXE_fathom"))
        .args(["homology", "chromatic", &path])
        .env("FATHOM_MAX_GENERATORS", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&capped.stderr);
    assert!(
        msg.contains("40 generators") && msg.contains("FATHOM_MAX_GENERATORS"),
        "{msg}"
    );
    let raised = Command::new(env!("CARGO_BIN_EXE_fathom"))
        .args(["homology", "chromatic", &path, "--max-generators", "40"])
        .env("FATHOM_MAX_GENERATORS", "10")
        .output()
        .unwrap();
    assert!(raised.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_fathom"))
        .args(["homology", "chromatic", &path])
        .env("FATHOM_MAX_GENERATORS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let edges = fathom(&["poly", "z", &data("theta_planar.json"), "--max-edges", "2"]);
    assert!(String::from_utf8_lossy(&edges.stderr).contains("--max-edges"));
}

#[test]
fn parse_errors_report_position() {
    let out = fathom_stdin(&["poly", "z"], "{\n\"vertices\": [}");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
