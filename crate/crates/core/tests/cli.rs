use std::path::Path;
use std::process::Command;

use cyclecode::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cyclecode").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

/// Data rows of a CSV with the elapsed-time column removed.
fn rows_without_timing(csv: &str) -> Vec<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let skip = header.iter().position(|&h| h == "elapsed_ms").unwrap();
    lines
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, v)| v)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn cubic(dir: &Path, n: usize, seed: u64) -> String {
    let path = dir.join(format!("cubic{n}.el"));
    let p = path.to_str().unwrap().to_string();
    let (code, _, err) = call(&["gen", "--regular", "3", "--n", &n.to_string(), "--seed", &seed.to_string(), "--out", &p]);
    assert_eq!(code, 0, "{err}");
    p
}

#[test]
fn generated_graph_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let g = cubic(dir.path(), 100, 7);
    let (code, out, _) = call(&["params", &g]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "rate"), "0.340000");
    assert_eq!(field(&out, "edges"), "150");
    assert_eq!(field(&out, "dimension"), "51");
    let (code, out, _) = call(&["spectrum", &g]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "lambda_star"), "2.000000");
    assert_eq!(field(&out, "big_lambda"), "2.000000");

    let again = dir.path().join("again.el");
    call(&["gen", "--regular", "3", "--n", "100", "--seed", "7", "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&g).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn named_graphs_to_stdout() {
    let (code, out, _) = call(&["gen", "--petersen"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("10 15\n"));
    let (_, out, _) = call(&["gen", "--complete", "4"]);
    assert_eq!(out.lines().count(), 7);
    let (_, out, _) = call(&["gen", "--degrees", "3,3,3,3,2,2", "--seed", "1"]);
    assert!(out.starts_with("6 8\n"));
}

#[test]
fn bounds_curve_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let (code, _, err) = call(&["bounds", "--formula", "main", "--grid", "0.1:0.9:0.1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let thetas: Vec<f64> = reader.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(thetas.len(), 9);
    assert!(thetas.windows(2).all(|w| w[1] < w[0]));

    let (code, out, _) = call(&["bounds", "--formula", "technical", "--grid", "0.2,0.5", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn simulate_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let g = cubic(dir.path(), 50, 3);
    let base = ["simulate", &g, "--p", "0.04,0.1", "--trials", "600", "--seed", "99"];
    let (c1, one, _) = call(&[&base[..], &["--threads", "1"]].concat());
    let (c2, two, _) = call(&[&base[..], &["--threads", "2"]].concat());
    let (c3, again, _) = call(&[&base[..], &["--threads", "1"]].concat());
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(rows_without_timing(&one), rows_without_timing(&two));
    assert_eq!(rows_without_timing(&one), rows_without_timing(&again));
    assert_eq!(rows_without_timing(&one).len(), 2);
    let header = one.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, cyclecode::harness::CSV_COLUMNS.join(","));
}

#[test]
fn sweep_reports_threshold_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let g = cubic(dir.path(), 60, 4);
    let out = dir.path().join("s.json");
    let (code, _, err) = call(&["sweep", &g, "--grid", "0.02:0.18:0.04", "--trials", "800", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert!((doc["theta_technical"].as_f64().unwrap() - 0.0669873).abs() < 1e-6);
    assert_eq!(doc["monotone"], true);
    assert!(doc["empirical_threshold"].as_f64().is_some());
}

#[test]
fn tree_batch_runs() {
    let (code, out, err) = call(&["gen", "--petersen"]);
    assert_eq!(code, 0, "{err}");
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.el");
    std::fs::write(&g, out).unwrap();
    let (code, out, err) = call(&["tree", g.to_str().unwrap(), "--alpha", "1/2", "--p", "0.3", "--n", "7", "--trials", "500", "--seed", "1"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().any(|l| l.starts_with("graph_id,root_arc,lambda_star")));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["bogus"]).0, 2);
    assert_eq!(call(&["params"]).0, 2);
    assert_eq!(call(&["gen", "--regular", "3", "--n", "10"]).0, 2);
    assert_eq!(call(&["gen", "--petersen", "--complete", "4"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let g = cubic(dir.path(), 20, 1);
    let (code, _, err) = call(&["simulate", &g, "--p", "0.5", "--seed", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("0.5"));
    assert_eq!(call(&["simulate", &g, "--p", "0.1"]).0, 2);
    let (code, _, err) = call(&["params", "/nonexistent/graph.el"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["gen", "--regular", "3", "--n", "7", "--seed", "1"]).0, 1);
    assert_eq!(call(&["simulate", &g, "--p", "0.1", "--seed", "1", "--method", "circuit-oracle"]).0, 1);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("simulate"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_cyclecode");
    let status = Command::new(bin).arg("frobnicate").output().unwrap().status;
    assert_eq!(status.code(), Some(2));
    let status = Command::new(bin).args(["params", "/nonexistent"]).output().unwrap().status;
    assert_eq!(status.code(), Some(1));
    let out = Command::new(bin).args(["gen", "--cycle", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some("5 5"));
}
