mod common;

use std::fs;
use std::path::Path;

use common::{golden_dir, two_triangles};
use depnet::cli::run;
use depnet::ingest::{write_edge_list, IsolatedPolicy};
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn depnet(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("depnet").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn fixture(dir: &TempDir) -> String {
    let path = dir.path().join("triangles.tsv");
    fs::write(&path, write_edge_list(&two_triangles(), IsolatedPolicy::Keep)).unwrap();
    path.display().to_string()
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Minimal structural check of an undirected DOT graph.
fn assert_valid_dot(dot: &str) {
    let body = dot.strip_prefix("graph communities {\n").and_then(|s| s.strip_suffix("}\n")).expect("graph wrapper");
    for line in body.lines() {
        let line = line.trim();
        assert!(line.ends_with("];"), "{line}");
        assert_eq!(line.matches('[').count(), 1, "{line}");
        let (head, _) = line.split_once('[').unwrap();
        let ids: Vec<&str> = head.split(" -- ").map(str::trim).collect();
        assert!(ids.len() <= 2);
        for id in ids {
            assert!(id == "node" || (id.starts_with('"') && id.ends_with('"')), "{id}");
        }
        assert_eq!(line.matches('"').count() % 2, 0, "{line}");
    }
}

#[test]
fn extract_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("edges.tsv");
    let golden = path_str(&golden_dir());
    let r = depnet(&["extract", &golden, "--out", &path_str(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("|N| = 27, |E| = 68, |P| = 5"), "{}", r.stderr);
    let expected = fs::read_to_string(common::data_dir().join("golden_edges.tsv")).unwrap();
    assert_eq!(fs::read_to_string(out).unwrap(), expected);
}

#[test]
fn extract_errors() {
    let dir = TempDir::new().unwrap();
    let r = depnet(&["extract", &path_str(dir.path())]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no input classes"), "{}", r.stderr);

    fs::write(dir.path().join("A.chd"), "package p; class A { int x; }\nclass B { String s; }\n").unwrap();
    let r = depnet(&["extract", &path_str(dir.path())]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "#depnet-edges v1 isolated=keep\n");
    assert!(r.stderr.contains("all isolated nodes have been discarded"), "{}", r.stderr);

    fs::write(dir.path().join("B.chd"), "package p;\nclass {\n").unwrap();
    let r = depnet(&["extract", &path_str(dir.path())]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("B.chd:2:7:"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(depnet(&["frobnicate"]).code, 1);
    assert_eq!(depnet(&["detect"]).code, 1);
    assert_eq!(depnet(&["detect", "x.tsv", "--algo", "xx"]).code, 1);
    assert_eq!(depnet(&["detect", "x.tsv", "--runs", "0"]).code, 1);
    assert_eq!(depnet(&["abstract", "x.tsv", "--partition", "p.tsv", "--components", "0"]).code, 1);
    let help = depnet(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("report"));
}

#[test]
fn detect_two_triangles() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir);
    let part = dir.path().join("p.tsv");
    let r = depnet(&["detect", &net, "--algo", "mo", "--runs", "5", "--out", &path_str(&part)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let stats: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!((stats["max_q"].as_f64().unwrap() - 0.357143).abs() < 1e-6);
    assert_eq!(stats["communities"], 2);
    assert_eq!(stats["config"]["runs"]["mo"], 5);
    assert_eq!(stats["config"]["seed"], 42);
    assert_eq!(stats["significant"], true);
    let tsv = fs::read_to_string(&part).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
    let labels: std::collections::HashSet<&str> = lines.iter().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(labels.len(), 2);
}

#[test]
fn detect_defaults_and_determinism() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir);
    let a = depnet(&["detect", &net, "--algo", "lp", "--runs", "1", "--seed", "7"]);
    let b = depnet(&["detect", &net, "--algo", "lp", "--runs", "1", "--seed", "7"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);

    let stats = dir.path().join("s.json");
    let r = depnet(&["detect", &net, "--algo", "eb", "--stats", &path_str(&stats)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 6);
    let stats: Value = serde_json::from_str(&fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(stats["config"]["runs"]["eb"], 10);
    assert_eq!(stats["q_values"].as_array().unwrap().len(), 1);
}

#[test]
fn refine_two_triangles() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir);
    let r = depnet(&["refine", &net, "--stats", &path_str(&dir.path().join("s.json"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "p.A\tp\np.B\tp\nq.C\tp\nr.D\tr\nr.E\tr\nr.F\tr\n");
    let s: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert!((s["q_initial"].as_f64().unwrap() - 0.193878).abs() < 1e-6);
    assert!((s["q_refined"].as_f64().unwrap() - 0.357143).abs() < 1e-6);
}

#[test]
fn metrics_report() {
    let dir = TempDir::new().unwrap();
    let pairs = "p.A\tp.B\tfield\np.B\tq.X\tfield\np.C\tq.Y\treturn\nq.X\tq.Y\tparameter\n";
    let net = dir.path().join("net.tsv");
    fs::write(&net, format!("#depnet-edges v1 isolated=keep\n{pairs}")).unwrap();
    let own = dir.path().join("own.tsv");
    fs::write(&own, "p.A\tp\np.B\tp\np.C\tp\nq.X\tq\nq.Y\tq\n").unwrap();
    let r = depnet(&["metrics", &path_str(&net), "--partition", &path_str(&own)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["packages"]["count"], 2);
    assert_eq!(report["packages"]["count_connected"], 3);
    assert_eq!(report["packages"]["disconnected"][0]["label"], "p");
    let own_name = path_str(&own);
    let self_nmi = report["nmi"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["a"] == "packages" && e["b"] == own_name.as_str())
        .unwrap();
    assert_eq!(self_nmi["nmi"], 1.0);
    assert!(report["packages"]["sizes"]["ccdf"].is_array());

    fs::write(&own, "p.A\tp\n").unwrap();
    let r = depnet(&["metrics", &path_str(&net), "--partition", &path_str(&own)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("have no label"), "{}", r.stderr);
}

#[test]
fn abstract_exports() {
    let dir = TempDir::new().unwrap();
    let net = fixture(&dir);
    let part = dir.path().join("p.tsv");
    fs::write(&part, "p.A\tleft\np.B\tleft\nq.C\tleft\nr.D\tright\nr.E\tright\nr.F\tright\n").unwrap();
    let r = depnet(&["abstract", &net, "--partition", &path_str(&part)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_valid_dot(&r.stdout);
    assert_eq!(r.stdout.matches(" -- ").count(), 1);

    let json = dir.path().join("c.json");
    let r = depnet(&["abstract", &net, "--partition", &path_str(&part), "--format", "json", "--out", &path_str(&json)]);
    assert_eq!(r.code, 0);
    let text = fs::read_to_string(&json).unwrap();
    let cg = depnet::CommunityGraph::from_json(&text).unwrap();
    assert_eq!(cg.to_json(), text);
    assert_eq!(cg.total_size(), 6);

    let r = depnet(&["abstract", &net, "--partition", &path_str(&part), "--format", "graphml"]);
    assert!(r.stdout.contains("<graphml"));
}

#[test]
fn component_limit() {
    let dir = TempDir::new().unwrap();
    let mut lines = String::from("#depnet-edges v1 isolated=keep\n");
    let mut part = String::new();
    for c in 0..8 {
        lines.push_str(&format!("c{c}.A\tc{c}.B\tfield\n"));
        part.push_str(&format!("c{c}.A\tk{c}\nc{c}.B\tk{c}\n"));
    }
    fs::write(dir.path().join("n.tsv"), lines).unwrap();
    fs::write(dir.path().join("p.tsv"), part).unwrap();
    let net = path_str(&dir.path().join("n.tsv"));
    let p = path_str(&dir.path().join("p.tsv"));
    let r = depnet(&["abstract", &net, "--partition", &p, "--components", "5", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let cg = depnet::CommunityGraph::from_json(&r.stdout).unwrap();
    assert_eq!(cg.communities.len(), 5);
    assert_eq!(cg.communities[0].label, "k0");
}

#[test]
fn report_is_byte_identical_across_runs() {
    let golden = path_str(&golden_dir());
    let a = depnet(&["report", &golden, "--runs", "4"]);
    let b = depnet(&["report", &golden, "--runs", "4"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(report["network"]["nodes"], 27);
    assert_eq!(report["algorithms"].as_array().unwrap().len(), 3);
    for algo in report["algorithms"].as_array().unwrap() {
        let significant = algo["mean_q"].as_f64().unwrap() >= 0.30;
        assert_eq!(algo["significant"], significant);
    }
}
