use std::path::PathBuf;

use super::*;
use crate::error::Error;

fn parse(text: &str) -> crate::Result<RunConfig> {
    parse_config(text, PathBuf::from("."))
}

#[test]
fn presets_load() {
    for name in preset_names() {
        load_preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(matches!(load_preset("nope"), Err(Error::Config(_))));
}

#[test]
fn table_preset_has_four_scenarios() {
    let c = load_preset("table-3.5-scenarios").unwrap();
    assert_eq!(c.pq_scenarios.len(), 4);
    assert_eq!(c.pq_scenarios["scenario-3"].n_turbines, 100);
    assert_eq!(c.grid("el-dabaa").unwrap().short_circuit_power, 1000.0);
}

#[test]
fn undefined_turbine_is_dangling() {
    let e = parse(
        r#"
        [portfolios.p]
        components = [{ site = "zafarana", turbine = "missing", installed_mw = 1.0 }]
        "#,
    )
    .unwrap_err();
    let msg = e.to_string();
    assert!(msg.contains("portfolios.p.components[0].turbine") && msg.contains("missing"), "{msg}");
}

#[test]
fn unknown_key_reports_location() {
    let e = parse("analyses = []\nbogus = 1\n").unwrap_err();
    assert!(e.to_string().contains("line 2"), "{e}");
}

#[test]
fn selected_analysis_needs_inputs() {
    assert!(parse(r#"analyses = ["credit"]"#).is_err());
}

#[test]
fn empty_analysis_list_is_noop() {
    let dir = tempfile::tempdir().unwrap();
    let c = parse("").unwrap();
    let r = run(&c, Some(dir.path())).unwrap();
    assert!(r.units.is_empty());
    assert!(r.all_ok());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

const ISOLATION: &str = r#"
analyses = ["reliability", "lcoe"]
options = { sweeps = false }

[markov.broken]
model = { labels = ["up", "down"], generator = [[-1.0, 0.5], [2.0, -0.5]], success_states = [0], initial = [1.0, 0.0] }

[markov.fine]
model = { labels = ["up", "down"], generator = [[-0.01, 0.1], [0.01, -0.1]], success_states = [0], initial = [1.0, 0.0] }
intervals = 10

[cost_models.m]
capacity = 1.0
capacity_factor = 0.3
capital_cost = 1000.0
variable_om = 10.0
"#;

#[test]
fn failing_analysis_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&parse(ISOLATION).unwrap(), Some(dir.path())).unwrap();
    assert!(matches!(r.units["reliability/broken"].status, Status::Failed(_)));
    assert_eq!(r.units["reliability/fine"].status, Status::Ok);
    assert_eq!(r.units["lcoe/m"].status, Status::Ok);
    assert!(!r.all_ok());
    assert!(dir.path().join("reliability_fine.csv").exists());
    assert!(dir.path().join("ledger_m.csv").exists());
}

#[test]
fn relative_data_paths_resolve_against_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z.csv"), crate::presets::ZAFARANA_CSV).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        r#"
        analyses = ["aggregate"]
        output_dir = "results"
        [sites.mine]
        data = "z.csv"
        [portfolios.p]
        components = [{ site = "mine", turbine = "scenario-i", installed_mw = 10.0 }]
        "#,
    )
    .unwrap();
    let c = load_config(&cfg).unwrap();
    let r = run(&c, None).unwrap();
    assert!(r.all_ok(), "{r}");
    assert!(dir.path().join("results/series_p.csv").exists());
}

#[test]
fn percent_display_scales_voltage_quantities() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = load_preset("table-3.5-scenarios").unwrap();
    run(&c, Some(&dir.path().join("f"))).unwrap();
    c.options.pq_display = PqDisplay::Percent;
    run(&c, Some(&dir.path().join("p"))).unwrap();
    let row = |sub: &str| -> f64 {
        let t = std::fs::read_to_string(dir.path().join(sub).join("pq.csv")).unwrap();
        let line = t.lines().find(|l| l.starts_with("d_ss_farm,")).unwrap().to_string();
        line.split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((row("p") - 100.0 * row("f")).abs() < 1e-12);
}

#[test]
fn credit_skips_years_outside_window() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("timestamp,output_fraction\n");
    for d in 1..=31 {
        for h in 0..24 {
            csv.push_str(&format!("2010-07-{d:02}T{h:02}:00:00,0.5\n"));
        }
    }
    csv.push_str("2011-01-01T00:00:00,0.9\n");
    std::fs::write(dir.path().join("h.csv"), csv).unwrap();
    let mut c = parse(
        r#"
        analyses = ["credit"]
        [credits.h]
        history = "h.csv"
        "#,
    )
    .unwrap();
    c.base_dir = dir.path().to_path_buf();
    let r = run(&c, Some(&dir.path().join("o"))).unwrap();
    let u = &r.units["credit/h"];
    assert_eq!(u.status, Status::Ok, "{r}");
    assert!(u.warnings.iter().any(|w| w.starts_with("2011:")));
    let rolling = std::fs::read_to_string(dir.path().join("o/credit_h_rolling.csv")).unwrap();
    assert_eq!(rolling.lines().count(), 2);
}
