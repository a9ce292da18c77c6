use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn windsite(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_windsite"))
        .args(args)
        .current_dir(dir)
        .env_remove("WINDSITE_OUT")
        .output()
        .unwrap()
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn lists_presets() {
    let tmp = tempfile::tempdir().unwrap();
    let out = windsite(&["presets"], tmp.path());
    assert!(out.status.success());
    let names: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(names.len(), 3);
    assert!(names.iter().any(|n| n == "table-3.5-scenarios"));
}

#[test]
fn pq_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = windsite(&["pq", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("o/pq.csv")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("d_ss_farm,")));
    assert_eq!(tree(&tmp.path().join("o")).len(), 1);
}

#[test]
fn output_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_windsite"))
        .args(["lcoe"])
        .current_dir(tmp.path())
        .env("WINDSITE_OUT", tmp.path().join("env-out"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("env-out/ledger_median.csv").exists());
}

#[test]
fn failed_unit_exits_one_and_keeps_others() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("run.toml"),
        r#"
analyses = ["reliability", "lcoe"]
output_dir = "res"
options = { sweeps = false }

[markov.broken]
model = { labels = ["up", "down"], generator = [[-1.0, 0.5], [2.0, -0.5]], success_states = [0], initial = [1.0, 0.0] }

[cost_models.m]
capacity = 1.0
capacity_factor = 0.3
capital_cost = 1000.0
variable_om = 10.0
"#,
    )
    .unwrap();
    let out = windsite(&["run", "run.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(tmp.path().join("res/ledger_m.csv").exists());
    assert!(!tmp.path().join("res/reliability_broken.csv").exists());
}

#[test]
fn dangling_reference_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("bad.toml"),
        r#"
analyses = ["aggregate"]
[portfolios.p]
components = [{ site = "zafarana", turbine = "missing", installed_mw = 1.0 }]
"#,
    )
    .unwrap();
    let out = windsite(&["run", "bad.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("portfolios.p.components[0].turbine"), "{err}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn run_needs_a_configuration() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(windsite(&["run"], tmp.path()).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for d in ["a", "b"] {
        let out = windsite(&["run", "--preset", "case-ab", "--out", d], tmp.path());
        assert!(out.status.success());
    }
    let a = tree(&tmp.path().join("a"));
    assert!(!a.is_empty());
    assert_eq!(a, tree(&tmp.path().join("b")));
}
