//! End-to-end checks of the installed binary: verbs, scenario files, log
//! replay, and exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn fir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json_section(text: &str) -> String {
    text.split("---json---").nth(1).expect("report has a json section").to_string()
}

#[test]
fn reduce_verb_matches_worked_example() {
    let out = fir(&["reduce", "--xi", "1+a, -1-a-b-ba", "--alpha", "1+b, 1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("diameter: 3 -> 1"), "{text}");
    assert!(text.contains("\"result\": \"-1-a\""), "{text}");
}

#[test]
fn ideal_basis_exit_codes() {
    let out = fir(&["ideal-basis", "--gens", "1+a, 1+a+b+ba"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("VERIFIED_FREE"));

    let out = fir(&["ideal-basis", "--gens", "1+a, 1+b", "--rmax", "4"]);
    assert_eq!(out.status.code(), Some(2), "bounded searches exit 2");
    assert!(stdout(&out).contains("INDEPENDENT_UP_TO(4)"));
}

#[test]
fn parse_errors_exit_one() {
    let out = fir(&["ideal-basis", "--gens", "1+"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("parse error"));
}

#[test]
fn check_hypothesis_on_the_tree() {
    let out = fir(&["check-hypothesis", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("satisfied"));
}

#[test]
fn scenario_file_runs() {
    let dir = std::env::temp_dir();
    let path = dir.join("fir_scenario_test.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# worked reduction over fp:2").unwrap();
    writeln!(f, "task=reduce").unwrap();
    writeln!(f, "domain=fp:2").unwrap();
    writeln!(f, "xi=1+a, 1+a+b+ba").unwrap();
    writeln!(f, "alpha=1+b, -1").unwrap();
    drop(f);
    let out = fir(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("\"diam_after\": \"1\""));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn replay_verb_applies_logs() {
    let dir = std::env::temp_dir();
    let path = dir.join("fir_log_test.txt");
    std::fs::write(&path, "E 1 2 -b\nE 1 2 -1\n").unwrap();
    let out = fir(&["replay", "--log", path.to_str().unwrap(), "--input", "1+a, 1+a+b+ba"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("result: [1+a, 0]"), "{text}");

    // replay on the identity matrix reproduces an elementary matrix
    std::fs::write(&path, "E 1 2 1+a\n").unwrap();
    let out = fir(&["replay", "--log", path.to_str().unwrap(), "--identity", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result: [(1; 0), (1+a; 1)]"), "{}", stdout(&out));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn binary_reports_are_deterministic() {
    let args = ["audit-lemmas", "--trials", "50", "--seed", "11"];
    let first = json_section(&stdout(&fir(&args)));
    let second = json_section(&stdout(&fir(&args)));
    assert_eq!(first, second);
}

#[test]
fn delta_verb_emits_parseable_edge_list() {
    let out = fir(&[
        "delta",
        "--oracle",
        "cayley-ball",
        "--extra",
        "ab",
        "--radius",
        "2",
        "--emit-edges",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(json_section(&text).trim()).unwrap();
    let (n, delta, _) = fir_core::space::parse_edge_list(json["edge_list"].as_str().unwrap()).unwrap();
    assert_eq!(n, json["vertices"].as_u64().unwrap() as usize);
    assert_eq!(delta.to_string(), json["delta"].as_str().unwrap());
}
