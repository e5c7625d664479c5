use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smms-compare")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let i = rdr.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rdr.records().map(|r| r.unwrap()[i].to_string()).collect()
}

#[test]
fn check_examples() {
    let o = run(&[
        "check", "--scenario", "gaussian:c=1", "--theorem", "mc_I", "--n", "3", "--p", "2", "--H", "0.5", "--a", "0", "--r", "1",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(column(&stdout(&o), "satisfied").iter().all(|s| s == "true"));

    let o = run(&[
        "check", "--scenario", "model:n=3,H=1", "--theorem", "vol_I", "--p", "2", "--H", "1", "--a", "0", "--r", "0.3", "--R", "0.8",
    ]);
    assert_eq!(code(&o), 0);
    let margin: f64 = column(&stdout(&o), "margin")[0].parse().unwrap();
    assert!(margin.abs() < 1e-6);

    let o = run(&[
        "check", "--scenario", "wobble:eps=0.1", "--theorem", "vol_I", "--p", "0.9", "--H", "0", "--a", "0.1", "--r", "0.5", "--R", "1",
    ]);
    assert_eq!(code(&o), 64);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["check", "--scenario", "gaussian", "--theorem", "nope", "--r", "1"])), 64);
    assert_eq!(code(&run(&["check", "--scenario", "nowhere:c=1", "--theorem", "mc_I", "--r", "1"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn strict_mode_turns_skips_into_exit_2() {
    let args = ["check", "--scenario", "wobble:eps=0.1", "--theorem", "growth", "--p", "2", "--R-list", "2,3"];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(column(&stdout(&o), "status"), ["skipped"]);
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(code(&run(&strict)), 2);
}

#[test]
fn mc_ii_sweep_over_gaussians() {
    let o = run(&["sweep", "--scenario", "gaussian", "--theorem", "mc_II"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let status = column(&out, "status");
    assert!(!status.is_empty() && status.iter().all(|s| s == "satisfied"));
    let m = column(&out, "diag:M");
    let n = column(&out, "diag:N");
    assert!(m.iter().chain(&n).all(|v| v.parse::<f64>().unwrap().is_finite()));
    assert!(out.lines().last().unwrap().starts_with("# summary: satisfied="));
}

#[test]
fn corrupted_scenario_is_recorded_as_a_load_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name":"bad","dimension":3,"warp":"2*r","weight":"0","r_max":2}"#).unwrap();
    let o = run(&["sweep", "--scenario", path.to_str().unwrap(), "--theorem", "mc_I"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert_eq!(column(&out, "theorem_id"), ["load"]);
    assert_eq!(column(&out, "status"), ["failed"]);
}

#[test]
fn structured_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "check", "--scenario", "flare:eps=0.1", "--theorem", "vol_I", "--theorem", "area_I", "--p", "2", "--H", "0", "--a", "0",
        "--r", "0.5", "--R", "1.5", "--format", "structured", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    assert_eq!(v["summary"]["satisfied"], 2);
}

#[test]
fn unwritable_output_exits_1() {
    let bad = Path::new("/nonexistent-dir/report.csv");
    let o = run(&[
        "check", "--scenario", "gaussian", "--theorem", "mc_I", "--p", "2", "--H", "0", "--a", "0", "--r", "1", "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
}
