use std::path::PathBuf;
use std::process::{Command, Output};

fn c2ss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c2ss")).args(args).env_remove("C2SS_OUT_DIR").output().unwrap()
}

fn spec() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs/tmf13.json");
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn picard_compactified() {
    let o = c2ss(&["picard", "compute", "--target", "Tmf13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"rank":1,"factors":[8]}"#);
    let o = c2ss(&["picard", "compute", "--target", "TMF13"]);
    assert_eq!(stdout(&o).trim(), r#"{"rank":0,"factors":[48]}"#);
}

#[test]
fn usage_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"algebra\": ").unwrap();
    assert_eq!(c2ss(&["sseq", "run", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(c2ss(&["sseq", "run", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(c2ss(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(c2ss(&["picard", "compute", "--target", "tmf"]).status.code(), Some(2));
    assert_eq!(c2ss(&["report", "all", "--only", "11"]).status.code(), Some(2));
}

#[test]
fn charts_are_stable_and_use_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_c2ss"))
            .args(["sseq", "chart", &spec(), "--page", "4", "--arrows", "--stems", "-4,8", "--filtrations", "0,10"])
            .env("C2SS_OUT_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run().status.code(), Some(0));
    let first = std::fs::read_to_string(dir.path().join("e4.svg")).unwrap();
    assert_eq!(run().status.code(), Some(0));
    let second = std::fs::read_to_string(dir.path().join("e4.svg")).unwrap();
    assert_eq!(first, second);
    assert!(first.contains("<title>d3</title>"));

    let o = c2ss(&["slice", "chart", "--stems", "-12,0", "--filtrations", "0,12"]);
    assert!(stdout(&o).contains("(-9, 0): D/1"));
}

#[test]
fn sseq_run_json() {
    let o = c2ss(&["sseq", "run", &spec(), "--window", "6,12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stable_page"], 8);
    let groups = v["groups"].as_array().unwrap();
    let eta = groups.iter().find(|g| g["degree"] == serde_json::json!([1, 0]) && g["s"] == 1).unwrap();
    assert_eq!(eta["group"], "Z/2");
}

#[test]
fn anderson_json() {
    let o = c2ss(&["anderson", "check", "--kmax", "6", "--cells", "12", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = v["pairings"].as_array().unwrap();
    assert_eq!(p.len(), 7);
    assert!(p.iter().all(|r| r["perfect"] == true));
}

#[test]
fn report_exit_codes_and_determinism() {
    let ok = c2ss(&["report", "all", "--only", "6,7", "--json", "--seed", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    let again = c2ss(&["report", "all", "--only", "6,7", "--json", "--seed", "5"]);
    assert_eq!(ok.stdout, again.stdout);
    // the eta/nu criterion is red, and the report says so
    let red = c2ss(&["report", "all", "--only", "3"]);
    assert_eq!(red.status.code(), Some(1));
    assert!(stdout(&red).starts_with("[FAIL]  3"));
}

#[test]
fn report_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r/report.json");
    let o = c2ss(&["report", "all", "--only", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["criteria"][0]["id"], 6);
    assert_eq!(v["criteria"][0]["tolerance"], "exact");
}
