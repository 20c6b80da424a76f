//! End-to-end tests of the command-line interface: exit codes, report
//! shapes, and byte determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run_cli(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vessel-elim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const BEZOUT_INPUT: &str = r#"{
  "p": [{"exp":[0],"coeff":"-1"},{"exp":[2],"coeff":"1"}],
  "q": [{"exp":[1],"coeff":"-1"},{"exp":[2],"coeff":"1"}],
  "n": 2
}"#;

#[test]
fn bezout_worked_example() {
    let out = run_cli(&["bezout"], BEZOUT_INPUT);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["kernel_dim"], 1);
    assert_eq!(
        v["results"]["matrix"],
        serde_json::json!([["-1/1", "1/1"], ["1/1", "-1/1"]])
    );
}

#[test]
fn malformed_json_exits_2() {
    let out = run_cli(&["bezout"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("line"));
}

#[test]
fn perturbed_vessel_exits_3_naming_axiom() {
    // generate a valid fixture, then corrupt one gamma entry
    let out = run_cli(&["fixtures", "gen", "--seed", "5"], "");
    assert_eq!(out.status.code(), Some(0));
    let mut v = stdout_json(&out);
    v["results"]["vessel"]["gamma_in"][0][0] = serde_json::json!("99/1");
    let input = serde_json::json!({ "vessel": v["results"]["vessel"] }).to_string();
    let out = run_cli(&["vessel", "check"], &input);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    let failing: Vec<String> = report["results"]["failing_axioms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    assert!(failing.contains(&"input-linkage".to_string()));
}

#[test]
fn identity_image_reproduces_conic() {
    let input = r#"{
      "detrep": {
        "d0": [["1","0"],["0","1"]],
        "d1": [["1","0"],["0","-1"]],
        "d2": [["0","1"],["1","0"]]},
      "p0": [{"exp":[1,0,0],"coeff":"1"}],
      "p1": [{"exp":[0,1,0],"coeff":"1"}],
      "p2": [{"exp":[0,0,1],"coeff":"1"}],
      "n": 1}"#;
    let out = run_cli(&["curve", "image"], input);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(
        v["results"]["image_poly"],
        serde_json::json!([
            {"exp": [0,0,2], "coeff": "-1/1"},
            {"exp": [0,2,0], "coeff": "-1/1"},
            {"exp": [2,0,0], "coeff": "1/1"}
        ])
    );
}

#[test]
fn same_spec_and_seed_give_identical_bytes() {
    let a = run_cli(&["fixtures", "gen", "--seed", "42"], "");
    let b = run_cli(&["fixtures", "gen", "--seed", "42"], "");
    assert_eq!(a.stdout, b.stdout);
    let c = run_cli(&["fixtures", "gen", "--seed", "43"], "");
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_theorems_end_to_end() {
    let gen = run_cli(&["fixtures", "gen", "--seed", "9"], "");
    let vessel = stdout_json(&gen)["results"]["vessel"].clone();
    let input = serde_json::json!({
        "vessel": vessel,
        "map": {
            "p0": [{"exp": [0,0], "coeff": "1"}],
            "p1": [{"exp": [1,0], "coeff": "1"}],
            "p2": [{"exp": [2,0], "coeff": "1"}],
            "n": 2
        }
    })
    .to_string();
    let out = run_cli(
        &["vessel", "verify-theorems", "--samples", "20", "--seed", "1"],
        &input,
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["pass"], true);
    assert_eq!(v["results"]["image_check"]["pass"], true);

    // determinism of the full report
    let again = run_cli(
        &["vessel", "verify-theorems", "--samples", "20", "--seed", "1"],
        &input,
    );
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn emitted_vessel_reparses_to_equal_value() {
    let gen = run_cli(&["fixtures", "gen", "--seed", "3"], "");
    let vessel = stdout_json(&gen)["results"]["vessel"].clone();
    let input = serde_json::json!({ "vessel": vessel }).to_string();
    let out = run_cli(&["vessel", "check"], &input);
    assert_eq!(out.status.code(), Some(0));
    // round-trip: feed the same vessel back through discriminant
    let out = run_cli(&["vessel", "discriminant"], &input);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["in_out_equal"], true);
}
