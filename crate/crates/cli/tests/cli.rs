use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn glkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glkh")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("glkh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_pu_accepts_and_rejects() {
    let ok = glkh(&["check-pu", fixture("theta11.graph").to_str().unwrap(), "--method", "all"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "PU\n");
    let bad = glkh(&["check-pu", fixture("odd4.graph").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("NOT PU: "));
    assert!(stdout(&bad).contains("det=4 at state {u,v,w,t}"));
}

#[test]
fn homology_prints_table() {
    let o = glkh(&["homology", fixture("e1.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "h 1 0 1 -\nh 1 2 1 -\n");
    let y = glkh(&["homology", fixture("e1.graph").to_str().unwrap(), "--assignment-type", "Y"]);
    assert_eq!(stdout(&y), stdout(&o));
    let f2 = glkh(&["homology", fixture("unknot_neg.graph").to_str().unwrap(), "--coeffs", "f2"]);
    assert_eq!(stdout(&f2), "h 1 2 1 -\n");
}

#[test]
fn homology_of_non_pu_graph_is_domain_failure() {
    let o = glkh(&["homology", fixture("odd4.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unreadable_input_is_usage_error() {
    assert_eq!(glkh(&["check-pu", "/nonexistent/graph"]).status.code(), Some(2));
    let bad = scratch("bad.graph", "vertex u 0 -\nedge u nowhere\n");
    assert_eq!(glkh(&["check-pu", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(glkh(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn apply_and_invariance() {
    let script = scratch("r.moves", "R u\n");
    let e1 = fixture("e1.graph");
    let out = scratch("out.graph", "");
    let o = glkh(&["apply", e1.to_str().unwrap(), script.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.contains("edge v u"), "{written}");
    let inv = glkh(&["invariance", e1.to_str().unwrap(), script.to_str().unwrap()]);
    assert_eq!(inv.status.code(), Some(0));
    assert!(stdout(&inv).starts_with("Equal("));
    let o3 = scratch("o3.moves", "O3 u v w\n");
    let failed = glkh(&["apply", e1.to_str().unwrap(), o3.to_str().unwrap()]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failed.stderr).starts_with("MoveFailed(0)"));
}

#[test]
fn faces_reports_parity() {
    let o = glkh(&["faces", fixture("om3.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("faces "));
    assert!(text.contains("parity signed: 0 violations"));
}

#[test]
fn orient_finds_orientation() {
    let u = scratch("square.ugraph", "vertex a 0 +\nvertex b 1 +\nvertex c 0 +\nvertex d 1 +\nuedge a b\nuedge b c\nuedge c d\nuedge d a\n");
    let o = glkh(&["orient", u.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g = scratch("square.graph", &stdout(&o));
    assert_eq!(stdout(&glkh(&["check-pu", g.to_str().unwrap()])), "PU\n");
}

#[test]
fn validate_battery_and_negative_control() {
    let e = fixture("even4.graph");
    let ok = glkh(&["validate", e.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).ends_with("1 graphs, 0 failed\n"));
    let bad = glkh(&["validate", e.to_str().unwrap(), "--negative-control"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL d-squared"));
    let random = glkh(&["validate", "--random", "5", "6", "3"]);
    assert_eq!(random.status.code(), Some(0), "{}", stdout(&random));
}
