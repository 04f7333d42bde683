use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ssdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssdiff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_csv_is_skew_and_reports_defect() {
    let o = ssdiff(&["gen", "--n", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header.len(), 8);
    assert_eq!(header[0], "col0");
    assert_eq!(rows.len(), 8);
    for (m, row) in rows.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            assert!((x + rows[k][m]).abs() <= 1e-14);
        }
    }
    assert!(stderr(&o).contains("skew defect"), "{}", stderr(&o));
}

#[test]
fn gen_csv_sources_agree() {
    let closed = parse_csv(&stdout(&ssdiff(&["gen", "--n", "12", "--alpha", "3", "--beta", "1.5"]))).1;
    for source in ["recurrence", "oracle", "generators"] {
        let o = ssdiff(&["gen", "--n", "12", "--alpha", "3", "--beta", "1.5", "--source", source]);
        assert!(o.status.success(), "{source}: {}", stderr(&o));
        let other = parse_csv(&stdout(&o)).1;
        for (r, s) in closed.iter().zip(&other) {
            for (x, y) in r.iter().zip(s) {
                assert!((x - y).abs() <= 1e-11, "{source}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn gen_generator_json_has_rank_two() {
    let o = ssdiff(&["gen", "--n", "4", "--source", "generators", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["n"], 4);
    assert_eq!(doc["rank"], 2);
    for key in ["a", "b", "d", "e"] {
        let rows = doc[key].as_array().unwrap();
        assert_eq!(rows.len(), 2, "{key}");
        assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 4), "{key}");
    }
}

#[test]
fn gen_dense_json_carries_parameters() {
    let o = ssdiff(&["gen", "--n", "3", "--format", "json", "--alpha", "1.5"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["alpha"], 1.5);
    assert_eq!(doc["source"], "closed_form");
    assert_eq!(doc["matrix"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_writes_file_and_reports_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = ssdiff(&["gen", "--n", "5", "--out", path_arg(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("skew defect"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 6);
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        vec!["gen", "--alpha", "0"],
        vec!["gen", "--beta", "-1"],
        vec!["gen", "--n", "0"],
        vec!["verify", "--n", "100000"],
        vec!["demo", "diffusion", "--dt", "-1"],
        vec!["demo", "advection", "--n", "4", "--mode", "4"],
        vec!["bench", "--min-n", "6"],
        vec!["bench", "--min-n", "64", "--max-n", "128", "--assert-linear"],
    ] {
        let o = ssdiff(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = ssdiff(&["gen", "--alpha", "0"]);
    assert!(stderr(&o).contains("alpha must be > 0"), "{}", stderr(&o));
}

fn verify_report(args: &[&str]) -> (Option<i32>, Value) {
    let o = ssdiff(args);
    (o.status.code(), serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn verify_defaults_pass() {
    let (code, report) = verify_report(&["verify"]);
    assert_eq!(code, Some(0));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["pass"], true);
    let checks = report["checks"].as_object().unwrap();
    for name in ["four_route_agreement", "skew_symmetry", "parity", "rank1_products", "boundedness_sums"] {
        assert_eq!(checks[name]["pass"], true, "{name}");
    }
    assert!(report["notes"][0].as_str().unwrap().contains("alternative q_n"));
}

#[test]
fn verify_asymmetric_parameters_pass() {
    let (code, report) = verify_report(&["verify", "--alpha", "4", "--beta", "2", "--n", "64"]);
    assert_eq!(code, Some(0), "{report}");
    assert!(report["checks"].get("parity").is_none());
}

#[test]
fn verify_against_generated_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("g.json");
    let o =
        ssdiff(&["gen", "--n", "16", "--source", "generators", "--format", "json", "--out", path_arg(&good)]);
    assert!(o.status.success());
    let (code, report) = verify_report(&["verify", "--n", "16", "--against", path_arg(&good)]);
    assert_eq!(code, Some(0));
    assert_eq!(report["checks"]["against_file"]["pass"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    doc["a"][0][3] = Value::from(doc["a"][0][3].as_f64().unwrap() * 1.001);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = ssdiff(&["verify", "--n", "16", "--against", path_arg(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("against_file"), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["checks"]["against_file"]["max_error"].as_f64().unwrap() > 1e-11);

    let (code, report) = verify_report(&["verify", "--n", "8", "--against", path_arg(&good)]);
    assert_eq!(code, Some(1));
    assert!(report["checks"]["against_file"]["max_error"].is_null());
}

#[test]
fn bench_small_sizes_are_deterministic() {
    let args = ["bench", "--min-n", "32", "--max-n", "128", "--seed", "7"];
    let run = || {
        let o = ssdiff(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        stdout(&o).lines().map(|l| l.split(',').map(String::from).collect::<Vec<_>>()).collect::<Vec<_>>()
    };
    let first = run();
    assert_eq!(first[0], ["op", "n", "median_ns", "ratio_vs_prev", "dense_median_ns", "checksum"]);
    assert_eq!(first.len(), 7);
    for row in &first[1..] {
        assert!(row[2].parse::<f64>().unwrap() > 0.0);
        assert!(row[5].parse::<f64>().unwrap().is_finite());
    }
    let ops: Vec<&str> = first[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ops, ["matvec", "matvec", "matvec", "solve", "solve", "solve"]);
    let second = run();
    let checksums = |rows: &[Vec<String>]| rows.iter().map(|r| r[5].clone()).collect::<Vec<_>>();
    assert_eq!(checksums(&first), checksums(&second));
}

fn demo(args: &[&str]) -> (Output, Vec<Vec<f64>>) {
    let o = ssdiff(args);
    let rows = parse_csv(&stdout(&o)).1;
    (o, rows)
}

#[test]
fn demo_diffusion_norm_decreases() {
    let (o, rows) = demo(&["demo", "diffusion", "--steps", "50", "--mode", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS"));
    assert_eq!(rows.len(), 51);
    assert!(rows.windows(2).all(|w| w[1][2] <= w[0][2]));
    assert!(rows[50][2] < rows[0][2]);
}

#[test]
fn demo_advection_conserves_norm() {
    let (o, rows) = demo(&["demo", "advection", "--steps", "200", "--mode", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(rows.iter().all(|r| (r[2] - 1.0).abs() <= 1e-10));
}

#[test]
fn demo_routes_agree() {
    for kind in ["diffusion", "advection"] {
        let common = ["demo", kind, "--n", "32", "--steps", "20", "--grid", "5"];
        let (_, structured) = demo(&[&common[..], &["--source", "generators"]].concat());
        let (_, dense) = demo(&[&common[..], &["--source", "closed-form"]].concat());
        assert_eq!(structured.len(), dense.len());
        for (r, s) in structured.iter().zip(&dense) {
            assert_eq!(r.len(), 8);
            for (x, y) in r.iter().zip(s) {
                assert!((x - y).abs() <= 1e-9, "{kind}: {x} vs {y}");
            }
        }
    }
}
