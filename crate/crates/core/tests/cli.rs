use std::path::Path;
use std::process::{Command, Output};

use ramsey_copies::graph::Graph;
use ramsey_copies::io::{read_object, write_object, Format, Object};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsey-copies")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn amalgam_formats_agree() {
    let a = stdout(&["gen", "amalgam", "--template", "C5", "--m", "3"]);
    let b = stdout(&["gen", "amalgam", "--template", "C5", "--m", "3", "--format", "edge-list"]);
    let (a, b) = (read_object(&a).unwrap(), read_object(&b).unwrap());
    assert_eq!(a, b);
    let g = a.as_graph().unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (11, 13));
}

#[test]
fn arrowing_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.json", &write_object(&Object::Graph(Graph::complete(5)), Format::Json));
    let k6 = write(dir.path(), "k6.json", &write_object(&Object::Graph(Graph::complete(6)), Format::Json));

    let res = json(&stdout(&["arrow", "decide", "--input", &k5, "--template", "K3"]));
    assert_eq!(res["arrows"], false);
    let witness = write(dir.path(), "w.txt", res["witness"].as_str().unwrap());
    stdout(&["arrow", "verify", "--input", &k5, "--template", "K3", "--colouring", &witness]);

    let mono: String = Graph::complete(5).edges().iter().map(|e| format!("{} {} 0\n", e.lo(), e.hi())).collect();
    let mono = write(dir.path(), "mono.txt", &(mono + "colours 1 mode nni\n"));
    let out = run(&["arrow", "verify", "--input", &k5, "--template", "K3", "--colouring", &mono]);
    assert_eq!(out.status.code(), Some(1));

    let res = json(&stdout(&["arrow", "decide", "--input", &k6, "--template", "K3"]));
    assert_eq!(res["arrows"], true);
    assert!(res["witness"].is_null());
    let out = run(&["--max-colourings", "3", "arrow", "decide", "--input", &k6, "--template", "K3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn colourings_verify_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let host = write(dir.path(), "c7.json", &write_object(&Object::Graph(Graph::cycle(7).unwrap()), Format::Json));
    let c = stdout(&["colour", "multipartite", "--input", &host, "--template", "K3", "--m", "2"]);
    let c = write(dir.path(), "multi.txt", &c);
    stdout(&["arrow", "verify", "--input", &host, "--template", "K3", "--colouring", &c]);

    let c = stdout(&["colour", "cycle", "--input", &host, "--length", "7", "--m", "2"]);
    let c = write(dir.path(), "cyc.txt", &c);
    stdout(&["arrow", "verify", "--input", &host, "--template", "C7", "--colouring", &c]);

    // C7 contains (1, C7).
    let out = run(&["colour", "cycle", "--input", &host, "--length", "7", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(&["gen", "sum-hypergraph", "--n", "20"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "nothing"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "p graph 3\n0 q\n");
    let out = run(&["analyze", "density", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn derived_graph_of_sum_hypergraph() {
    let res = stdout(&["gen", "derived-graph", "--n", "48"]);
    let g = read_object(&res).unwrap();
    assert_eq!(g.as_graph().unwrap().edge_count(), 361);
}

#[test]
fn thread_count_does_not_change_reports() {
    let args = |t: &'static str| ["--seed", "5", "--threads", t, "verify", "paper-claims", "--suite", "section5", "--instances", "6"];
    assert_eq!(stdout(&args("1")), stdout(&args("3")));
    let a = stdout(&["--seed", "5", "verify", "paper-claims", "--suite", "section2", "--instances", "6"]);
    let b = stdout(&["--seed", "6", "verify", "paper-claims", "--suite", "section2", "--instances", "6"]);
    assert_ne!(a, b);
}
