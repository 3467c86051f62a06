use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

use mcg_cohomology::cohomology::{coboundary, GeneratorSet, NonSeparatingPair};
use mcg_cohomology::exact::{rational, real};
use mcg_cohomology::fourier::SparseVector;
use mcg_cohomology::io::{cocycle_to_json, vector_to_entries};
use mcg_cohomology::lattice::{Genus, HomologyClass};
use mcg_cohomology::random;
use mcg_cohomology::words::{Curve, CurveTable, DeclaredIntersection, RelationInstance, TwistWord};

fn mcgcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcgcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn g3() -> Genus {
    Genus::new(3).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixture_vector() -> SparseVector {
    let mut r = ChaCha8Rng::seed_from_u64(42);
    random::vector(&mut r, g3(), 25, 10, 1000, true)
}

fn coboundary_fixture() -> String {
    let u = coboundary(&fixture_vector(), &GeneratorSet::basis(g3())).unwrap();
    cocycle_to_json(&u, vec![NonSeparatingPair::new("x1", "x2")])
}

/// The same cocycle with `u(τ_{y3})` moved off the coboundary. No applicable
/// catalog relation involves `y3`, so only the solver can notice.
fn perturbed_fixture() -> String {
    let g = g3();
    let u = coboundary(&fixture_vector(), &GeneratorSet::basis(g)).unwrap();
    let e = SparseVector::basis(&HomologyClass::x(g, 1)).unwrap();
    let bad = u
        .with_value("y3", u.value("y3").unwrap().add(&e).unwrap())
        .unwrap();
    cocycle_to_json(&bad, vec![])
}

#[test]
fn verify_relations_default_catalog_passes() {
    let o = mcgcoh(&["verify-relations", "--genus", "3"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["all_pass"], Value::Bool(true));
    let instances = report["instances"].as_array().unwrap();
    assert!(instances.len() >= 12);
    assert!(instances
        .iter()
        .all(|i| i["status"] == "pass" && i["residual"] == "0"));
    assert_eq!(report["random_words"]["symplectic_failures"], 0);
}

#[test]
fn verify_relations_names_broken_instance() {
    let g = g3();
    let rel = RelationInstance {
        name: "braid-disjoint".into(),
        curves: CurveTable::new(vec![
            Curve::nonseparating("a", HomologyClass::x(g, 1)),
            Curve::nonseparating("b", HomologyClass::y(g, 1)),
        ])
        .unwrap(),
        lhs: TwistWord::from_pairs(&[("a", 1), ("b", 1)]),
        rhs: TwistWord::from_pairs(&[("b", 1), ("a", 1)]),
        intersections: vec![DeclaredIntersection {
            a: "a".into(),
            b: "b".into(),
            value: 1,
        }],
    };
    let dir = TempDir::new().unwrap();
    let path = write(
        dir.path(),
        "rel.json",
        &serde_json::to_string(&[rel]).unwrap(),
    );
    let o = mcgcoh(&[
        "verify-relations",
        "--genus",
        "3",
        "--in",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 1);
    assert!(stderr(&o).contains("relation braid-disjoint failed"));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = report["instances"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["name"] == "braid-disjoint")
        .unwrap();
    assert_eq!(entry["status"], "fail");
    assert_eq!(entry["source"], "file");
}

#[test]
fn verify_relations_reports_metadata_mismatch() {
    let g = g3();
    let rel = RelationInstance {
        name: "commute-mislabelled".into(),
        curves: CurveTable::new(vec![
            Curve::nonseparating("a", HomologyClass::x(g, 1)),
            Curve::nonseparating("b", HomologyClass::x(g, 2)),
        ])
        .unwrap(),
        lhs: TwistWord::from_pairs(&[("a", 1), ("b", 1)]),
        rhs: TwistWord::from_pairs(&[("b", 1), ("a", 1)]),
        intersections: vec![DeclaredIntersection {
            a: "a".into(),
            b: "b".into(),
            value: 1,
        }],
    };
    let dir = TempDir::new().unwrap();
    let path = write(
        dir.path(),
        "rel.json",
        &serde_json::to_string(&rel).unwrap(),
    );
    let o = mcgcoh(&["verify-relations", "--in", path.to_str().unwrap()]);
    assert_eq!(status(&o), 1);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = report["instances"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["name"] == "commute-mislabelled")
        .unwrap();
    assert_eq!(entry["status"], "metadata-mismatch");
}

#[test]
fn genus_two_is_rejected() {
    let o = mcgcoh(&["verify-relations", "--genus", "2"]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("genus < 3"));
}

#[test]
fn malformed_input_is_status_two() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "bad.json", "{ not json");
    for cmd in ["verify-relations", "solve", "check-cocycle"] {
        let o = mcgcoh(&[cmd, "--in", path.to_str().unwrap()]);
        assert_eq!(status(&o), 2, "{cmd}");
    }
    assert_eq!(status(&mcgcoh(&["solve"])), 2);
    assert_eq!(status(&mcgcoh(&["no-such-command"])), 2);
}

#[test]
fn solve_coboundary_fixture() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", &coboundary_fixture());
    let out = dir.path().join("report.json");
    let o = mcgcoh(&[
        "solve",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["residual"], "0/1");
    assert_eq!(report["residual_zero"], true);
    assert_eq!(
        report["f"],
        serde_json::to_value(vector_to_entries(&fixture_vector())).unwrap()
    );
    let rows = report["smoothness"].as_array().unwrap();
    assert_eq!(
        rows.iter()
            .map(|r| r["k"].as_u64().unwrap())
            .collect::<Vec<_>>(),
        vec![2, 3, 4, 5]
    );
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn solve_perturbed_fixture_fails() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", &perturbed_fixture());
    let o = mcgcoh(&["solve", "--in", input.to_str().unwrap()]);
    assert_eq!(status(&o), 1, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["residual_zero"], false);
}

#[test]
fn solve_refuses_relation_violation() {
    let g = g3();
    let u = coboundary(&fixture_vector(), &GeneratorSet::basis(g)).unwrap();
    let e = SparseVector::basis(&HomologyClass::y(g, 1)).unwrap();
    let bad = u
        .with_value("x1", u.value("x1").unwrap().add(&e).unwrap())
        .unwrap();
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", &cocycle_to_json(&bad, vec![]));
    let o = mcgcoh(&["solve", "--in", input.to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("relation"));
}

#[test]
fn solve_rejects_zero_class_coefficient() {
    let text = r#"{
  "genus": 3,
  "generators": [
    {"id": "x1", "cls": [1, 0, 0, 0, 0, 0]}, {"id": "y1", "cls": [0, 1, 0, 0, 0, 0]},
    {"id": "x2", "cls": [0, 0, 1, 0, 0, 0]}, {"id": "y2", "cls": [0, 0, 0, 1, 0, 0]},
    {"id": "x3", "cls": [0, 0, 0, 0, 1, 0]}, {"id": "y3", "cls": [0, 0, 0, 0, 0, 1]}
  ],
  "values": {"x1": [{"class": [0, 0, 0, 0, 0, 0], "re": "1/2", "im": "0/1"}]}
}"#;
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", text);
    let o = mcgcoh(&["solve", "--in", input.to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("mean"), "{}", stderr(&o));
}

#[test]
fn orbit_examples() {
    let o = mcgcoh(&["orbit", "--class", "2 3 0 0 0 0", "--steps", "5"]);
    assert_eq!(status(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,class,norm1");
    let norms: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(norms, vec![5, 7, 9, 11, 13, 15]);
    assert_eq!(lines[2], "1,2 5 0 0 0 0,7");

    let o = mcgcoh(&["orbit", "--class", "1 0 0 0 0 0", "--steps", "1"]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);

    let o = mcgcoh(&[
        "orbit",
        "--class",
        "-1 -4 2 0 0 0",
        "--steps",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(status(&o), 0);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let norms: Vec<u64> = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["norm1"].as_u64().unwrap())
        .collect();
    assert!(norms.windows(2).all(|w| w[1] > w[0]));

    assert_eq!(status(&mcgcoh(&["orbit", "--class", "0 0 0 0 0 0"])), 2);
    assert_eq!(status(&mcgcoh(&["orbit", "--class", "1 0 0 0"])), 2);
}

#[test]
fn check_cocycle_reports() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "good.json", &coboundary_fixture());
    let o = mcgcoh(&["check-cocycle", "--in", good.to_str().unwrap()]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["relations"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["residual"] == "0/1"));
    let s = report["s_norms"].as_array().unwrap();
    assert_eq!(s.len(), 6);
    assert!(s.iter().all(|r| r["norm"] == "0/1"));
    assert_eq!(report["c_pairings"][0]["value"]["re"], "0/1");

    let g = g3();
    let u = coboundary(&fixture_vector(), &GeneratorSet::basis(g)).unwrap();
    let bad = u
        .with_value(
            "x2",
            u.value("x2")
                .unwrap()
                .add(
                    &SparseVector::basis(&HomologyClass::y(g, 2))
                        .unwrap()
                        .scale(&real(rational(1, 3))),
                )
                .unwrap(),
        )
        .unwrap();
    let bad = write(dir.path(), "bad.json", &cocycle_to_json(&bad, vec![]));
    let o = mcgcoh(&["check-cocycle", "--in", bad.to_str().unwrap()]);
    assert_eq!(status(&o), 1);
    assert!(stderr(&o).contains("nonzero residual"));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["flagged"], true);
    assert!(report["relations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["residual"] != "0/1"));

    let empty = r#"{"genus": 3, "generators": [{"id": "x1", "cls": [1, 0, 0, 0, 0, 0]}]}"#;
    let empty = write(dir.path(), "empty.json", empty);
    let o = mcgcoh(&["check-cocycle", "--in", empty.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["s_norms"][0]["norm"], "0/1");
    assert_eq!(report["flagged"], false);
}

#[test]
fn decay_report_of_vector_and_cocycle() {
    let dir = TempDir::new().unwrap();
    let v = write(
        dir.path(),
        "v.txt",
        "0 1 2 0 0 0  1/2 0\n0 0 0 0 0 -1  -1/4 1/4\n",
    );
    let o = mcgcoh(&[
        "decay-report",
        "--in",
        v.to_str().unwrap(),
        "--kmax",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "k,F_k\n0,1/2\n1,3/2\n2,9/2\n");

    let u = write(dir.path(), "u.json", &coboundary_fixture());
    let o = mcgcoh(&["decay-report", "--in", u.to_str().unwrap()]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
}

#[test]
fn genus_flag_must_match_file() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", &coboundary_fixture());
    let o = mcgcoh(&["solve", "--genus", "4", "--in", input.to_str().unwrap()]);
    assert_eq!(status(&o), 2);
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "u.json", &coboundary_fixture());
    let runs: Vec<Vec<Vec<u8>>> = (0..2)
        .map(|_| {
            vec![
                mcgcoh(&["verify-relations", "--seed", "9"]).stdout,
                mcgcoh(&["solve", "--in", input.to_str().unwrap()]).stdout,
                mcgcoh(&["check-cocycle", "--in", input.to_str().unwrap()]).stdout,
                mcgcoh(&["orbit", "--class", "0 0 -3 1 0 2"]).stdout,
            ]
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_ne!(
        mcgcoh(&["verify-relations", "--seed", "9"]).stdout,
        mcgcoh(&["verify-relations", "--seed", "10"]).stdout
    );
}
