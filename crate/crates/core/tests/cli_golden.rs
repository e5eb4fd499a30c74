//! Runs the built binary and compares against pinned outputs.

use std::path::Path;
use std::process::Command;

fn schoof(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_schoof"))
        .args(args)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn worked_example_trace_json() {
    let (out, code) = schoof(&["count", "--q", "5", "--curve", "0,1", "--trace", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("worked_example_count.json"));
}

#[test]
fn worked_example_trace_text() {
    let (out, _) = schoof(&["count", "--q", "5", "--curve", "0,1", "--trace"]);
    assert_eq!(out, golden("worked_example_count.txt"));
}

#[test]
fn ring_example_json() {
    let (out, code) = schoof(&["factor", "--q", "5", "--h", "4,0,1", "--curve", "1,0,0,0", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("ring_example_factor.json"));
}

#[test]
fn ring_example_text() {
    let (out, _) = schoof(&["factor", "--q", "5", "--h", "4,0,1", "--curve", "1,0,0,0"]);
    assert_eq!(out, golden("ring_example_factor.txt"));
}

#[test]
fn process_exit_codes() {
    assert_eq!(schoof(&["count", "--q", "4", "--curve", "0,1"]).1, 2);
    assert_eq!(schoof(&["factor", "--q", "5", "--h", "4,0,1", "--curve", "0,1"]).1, 3);
    assert_eq!(schoof(&["bogus"]).1, 2);
    assert_eq!(schoof(&["--help"]).1, 0);
}

#[test]
fn json_stdout_is_a_single_record() {
    let (out, _) = schoof(&["zeta", "--q", "5", "--curve", "0,1", "--n", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["counts"], serde_json::json!([6, 36]));
    assert_eq!(out.lines().count(), 1);
}
