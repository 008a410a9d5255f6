use std::path::PathBuf;
use std::process::{Command, Output};

fn insep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes a ring document into a per-test scratch directory.
fn ring_file(name: &str, json: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("insep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

const CUSP_OVER_D5: &str = r#"{"p": 2, "F": "x^2 + y*z + x*y^2", "N": 16}"#;

#[test]
fn classify_reports_type_and_honours_expect() {
    let f = ring_file("a1.json", CUSP_OVER_D5);
    let f = f.to_str().unwrap();
    let o = insep(&["classify", f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("A1"));
    assert!(stdout(&o).contains("certified modulo m^17"));
    assert_eq!(insep(&["classify", f, "--expect", "A1"]).status.code(), Some(0));
    assert_eq!(insep(&["classify", f, "--expect", "A2"]).status.code(), Some(1));
}

#[test]
fn quotient_by_vector_field_is_d5_half() {
    let f = ring_file("q.json", CUSP_OVER_D5);
    let o = insep(&["quotient", f.to_str().unwrap(), "--derivation", "z,y^2,0", "--expect", "D5^1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("D5 coindex 1/2"));
}

#[test]
fn derivation_check_finds_witness() {
    let f = ring_file("d.json", CUSP_OVER_D5);
    let o = insep(&["verify-derivation", f.to_str().unwrap(), "--derivation", "z,y^2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p-closed: h = 0"));
    let bad = insep(&["verify-derivation", f.to_str().unwrap(), "--derivation", "1,0,0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn impossible_chain_exits_one() {
    let o = insep(&["chain", "--type", "E8^1", "--p", "2", "--mode", "etale-last"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Impossible per exclusion set"));
}

#[test]
fn chain_json_is_deterministic_apart_from_timing() {
    let run = || {
        let o = insep(&["--format", "json", "chain", "--type", "E7^1", "--p", "2"]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let first = run();
    assert_eq!(first, run());
    assert_eq!(first["command"], "chain");
    assert_eq!(first["outcome"], "pass");
    assert_eq!(first["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn input_errors_name_the_field() {
    let f = ring_file("bad.json", r#"{"p": 2, "F": "x^2 + y*z", "M": 3}"#);
    let o = insep(&["classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`M`"));

    let f = ring_file("badf.json", r#"{"p": 2, "F": "x^2 + + y"}"#);
    let o = insep(&["--format", "json", "classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "input-error");
    assert!(v["result"]["error"].as_str().unwrap().starts_with("field F"));

    assert_eq!(insep(&["chain", "--type", "Q9", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn single_row_sweep_passes() {
    let o = insep(&["verify-table", "--row", "3.5", "--max-param", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4 reports, 0 failing"));
}

#[test]
fn graph_finds_path_and_emits_dot() {
    let o = insep(&["graph", "--p", "2", "--from", "A1", "--to", "E7^0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("E7^0"));
    let dot = insep(&["graph", "--p", "3", "--max-param", "1"]);
    assert!(stdout(&dot).starts_with("graph inseparable_p3 {"));
}

#[test]
fn selftest_single_criterion() {
    let o = insep(&["selftest", "--only", "AC4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("AC4 PASS"));
}
