use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use super::config::{AnalysisKind, PqDisplay, RunConfig};
use crate::aggregation::{
    aggregate_portfolio, delta_csv, duration_csv, variation_range, PortfolioCase, PortfolioComponent,
};
use crate::credit::{credit_report_csv, credit_table, pjm_rolling_credit, read_hourly_history, replacement_capacity};
use crate::credit::{window_capacity_factor, GenerationHistory, YearData};
use crate::economics::{
    build_ledger, coupling_cases, coupling_compare, exact_breakeven, model_lcoe, scenario_capacity_factors,
    sensitivity_sweep, CoupledPlant, CouplingAdjustments, SweepParameter,
};
use crate::error::{Error, Result};
use crate::markov::{
    availability, build_dg_model, build_wt_model, min_output_scenario, reliability_curve, uniform_grid,
    wind_diesel_comparison, wind_transition_probs, DieselRates, StepControl, WindTurbineRates,
};
use crate::presets::Scenario;
use crate::voltage::{assess_scenario, PQAssessment};
use crate::wind::{HOURS, MONTHS};

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitReport {
    pub status: Status,
    /// File names inside the output directory.
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub output_dir: PathBuf,
    /// Keyed `kind` or `kind/name`.
    pub units: BTreeMap<String, UnitReport>,
}

impl RunReport {
    pub fn all_ok(&self) -> bool {
        self.units.values().all(|u| u.status == Status::Ok)
    }

    pub fn files(&self) -> Vec<PathBuf> {
        self.units
            .values()
            .flat_map(|u| u.files.iter().map(|f| self.output_dir.join(f)))
            .collect()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "output directory: {}", self.output_dir.display())?;
        if self.units.is_empty() {
            writeln!(f, "no analyses selected")?;
        }
        for (id, u) in &self.units {
            match &u.status {
                Status::Ok => writeln!(f, "ok     {id}")?,
                Status::Failed(e) => writeln!(f, "FAILED {id}: {e}")?,
            }
            for file in &u.files {
                writeln!(f, "         wrote {file}")?;
            }
            for n in &u.notes {
                writeln!(f, "         {n}")?;
            }
            for w in &u.warnings {
                writeln!(f, "         warning: {w}")?;
            }
        }
        Ok(())
    }
}

/// Collects one unit's outputs.
struct Unit<'a> {
    dir: &'a Path,
    files: Vec<String>,
    warnings: Vec<String>,
    notes: Vec<String>,
}

impl Unit<'_> {
    fn write(&mut self, name: String, contents: &str) -> Result<()> {
        let path = self.dir.join(&name);
        std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.files.push(name);
        Ok(())
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Runs every selected analysis. Only failure to create the output directory
/// aborts; analysis failures are recorded per unit.
pub fn run(cfg: &RunConfig, out_override: Option<&Path>) -> Result<RunReport> {
    let output_dir = match (out_override, &cfg.output_dir) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => cfg.base_dir.join(d),
        (None, None) => cfg.base_dir.join("out"),
    };
    std::fs::create_dir_all(&output_dir).map_err(|e| Error::Io(format!("{}: {e}", output_dir.display())))?;

    let mut jobs: Vec<(String, Box<dyn Fn(&mut Unit) -> Result<()> + '_>)> = Vec::new();
    let mut kinds = cfg.analyses.clone();
    kinds.sort();
    kinds.dedup();
    for kind in kinds {
        match kind {
            AnalysisKind::Pq => jobs.push(("pq".into(), Box::new(move |u| run_pq(cfg, u)))),
            AnalysisKind::Reliability => {
                for name in cfg.markov.keys() {
                    jobs.push((format!("reliability/{name}"), Box::new(move |u| run_markov(cfg, name, u))));
                }
            }
            AnalysisKind::Aggregate => {
                for name in cfg.portfolios.keys() {
                    jobs.push((format!("aggregate/{name}"), Box::new(move |u| run_portfolio(cfg, name, u))));
                }
                jobs.push(("aggregate/ranges".into(), Box::new(move |u| run_ranges(cfg, u))));
            }
            AnalysisKind::Credit => {
                for name in cfg.credits.keys() {
                    jobs.push((format!("credit/{name}"), Box::new(move |u| run_credit(cfg, name, u))));
                }
            }
            AnalysisKind::Lcoe => {
                for name in cfg.cost_models.keys() {
                    jobs.push((format!("lcoe/{name}"), Box::new(move |u| run_lcoe(cfg, name, u))));
                }
            }
            AnalysisKind::Compare => {
                for name in cfg.comparisons.keys() {
                    jobs.push((format!("compare/{name}"), Box::new(move |u| run_compare(cfg, name, u))));
                }
            }
        }
    }

    let mut units = BTreeMap::new();
    for (id, job) in jobs {
        let mut u = Unit {
            dir: &output_dir,
            files: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
        };
        let status = match job(&mut u) {
            Ok(()) => Status::Ok,
            Err(e) => Status::Failed(e.to_string()),
        };
        units.insert(
            id,
            UnitReport {
                status,
                files: u.files,
                warnings: u.warnings,
                notes: u.notes,
            },
        );
    }
    Ok(RunReport { output_dir, units })
}

fn build_portfolio(cfg: &RunConfig, name: &str) -> Result<PortfolioCase> {
    let p = cfg
        .portfolios
        .get(name)
        .ok_or_else(|| Error::Config(format!("unknown portfolio `{name}`")))?;
    let components = p
        .components
        .iter()
        .map(|c| {
            Ok(PortfolioComponent {
                site: cfg.site(&c.site)?,
                curve: cfg.turbine(&c.turbine)?,
                installed_mw: c.installed_mw,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PortfolioCase {
        label: p.label.clone().unwrap_or_else(|| name.to_string()),
        components,
    })
}

fn pq_rows(a: &PQAssessment, scale: f64) -> Vec<(&'static str, String)> {
    vec![
        ("v_a_ms", a.v_a.to_string()),
        ("s60_mva", a.s60.to_string()),
        ("s_n_mva", a.s_n.to_string()),
        ("s_sc_mva", a.s_sc.to_string()),
        ("phi_deg", a.phi_deg.to_string()),
        ("psi_k_deg", a.psi_k_deg.to_string()),
        ("n_turbines", a.n_turbines.to_string()),
        ("d_ss", (a.d_ss * scale).to_string()),
        ("d_ss_farm", (a.d_ss_farm * scale).to_string()),
        ("d_ss_compliant", a.dss_compliant.to_string()),
        ("flicker_coefficient", a.flicker_coefficient.to_string()),
        ("p_lt", (a.p_lt_continuous * scale).to_string()),
        ("p_lt_farm", (a.p_lt_continuous_farm * scale).to_string()),
        ("k_u", a.k_u.to_string()),
        ("d_so", (a.d_so * scale).to_string()),
        ("n120_cut_in", a.switch_cut_in.n120.to_string()),
        ("k_f_cut_in", a.switch_cut_in.k_f.to_string()),
        ("p_lt_cut_in", (a.switch_cut_in.p_lt * scale).to_string()),
        ("p_lt_farm_cut_in", (a.switch_cut_in.p_lt_farm * scale).to_string()),
        ("n120_rated", a.switch_rated.n120.to_string()),
        ("k_f_rated", a.switch_rated.k_f.to_string()),
        ("p_lt_rated", (a.switch_rated.p_lt * scale).to_string()),
        ("p_lt_farm_rated", (a.switch_rated.p_lt_farm * scale).to_string()),
    ]
}

/// One column per scenario, one row per quantity.
fn run_pq(cfg: &RunConfig, u: &mut Unit) -> Result<()> {
    let scale = match cfg.options.pq_display {
        PqDisplay::Fraction => 1.0,
        PqDisplay::Percent => 100.0,
    };
    let mut columns = Vec::new();
    for (name, s) in &cfg.pq_scenarios {
        let pq = cfg.pq_turbine(&s.turbine)?;
        let grid = cfg.grid(&s.grid)?;
        let a = assess_scenario(&pq, &grid, s.annual_mean_speed, s.n_turbines, s.dss_limit)
            .map_err(|e| e.context(format!("scenario {name}")))?;
        u.warnings.extend(a.warnings.iter().map(|w| format!("{name}: {w}")));
        if !a.dss_compliant {
            u.warnings.push(format!("{name}: farm steady-state voltage change exceeds the limit"));
        }
        columns.push((name.as_str(), pq_rows(&a, scale)));
    }
    let mut s = String::from("quantity");
    for (name, _) in &columns {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for r in 0..columns[0].1.len() {
        s.push_str(columns[0].1[r].0);
        for (_, rows) in &columns {
            s.push(',');
            s.push_str(&rows[r].1);
        }
        s.push('\n');
    }
    u.write("pq.csv".into(), &s)
}

fn run_markov(cfg: &RunConfig, name: &str, u: &mut Unit) -> Result<()> {
    let m = &cfg.markov[name];
    let times = uniform_grid(m.horizon_h, m.intervals);
    let ctl = StepControl::default();
    let stem = file_stem(name);
    if let Some(custom) = &m.model {
        let model = custom.to_model();
        u.write(format!("markov_{stem}.csv"), &model.to_csv())?;
        let a = availability(&model, &times, &ctl)?;
        let r = reliability_curve(&model, &times, &ctl)?;
        let mut s = String::from("time_h,availability,reliability\n");
        for k in 0..times.len() {
            s.push_str(&format!("{},{},{}\n", times[k], a.values[k], r.values[k]));
        }
        return u.write(format!("reliability_{stem}.csv"), &s);
    }

    let curve = cfg.turbine(m.turbine.as_deref().expect("validated"))?;
    let weibull = match (&m.weibull, &m.site) {
        (Some(w), _) => *w,
        (None, Some(site)) => cfg
            .site(site)?
            .weibull
            .ok_or_else(|| Error::Config(format!("site `{site}` has no Weibull parameters")))?,
        (None, None) => unreachable!("validated"),
    };
    let dg = m.diesel.unwrap_or(DieselRates::TABLE_DEFAULT);
    let wt = m.wind_turbine.unwrap_or(WindTurbineRates::TABLE_DEFAULT);
    let (probs, comparison) = match (m.wf_capacity_mw, m.min_mw) {
        (Some(cap), Some(min)) => {
            let s = min_output_scenario(cap, min, &curve, &weibull, &wt, &dg, &times, &ctl)?;
            u.notes.push(format!(
                "threshold hub-height speed {:.4} m/s ({} MW per {} MW train)",
                s.threshold_speed, s.min_mw, s.train_capacity_mw
            ));
            (s.probs, s.comparison)
        }
        _ => {
            let p = wind_transition_probs(&weibull, &curve)?;
            (p, wind_diesel_comparison(&dg, &wt, &p, &times, &ctl)?)
        }
    };
    u.write(format!("markov_{stem}_dg.csv"), &build_dg_model(&dg).to_csv())?;
    u.write(format!("markov_{stem}_wt.csv"), &build_wt_model(&wt, &probs).to_csv())?;
    u.write(format!("reliability_{stem}.csv"), &comparison.to_csv())?;
    let last = times.len() - 1;
    u.notes.push(format!(
        "at {} h: availability DG {:.6}, wind-diesel {:.6}; reliability DG {:.6}, wind-diesel {:.6}",
        times[last],
        comparison.dg.availability.values[last],
        comparison.wind_diesel.availability.values[last],
        comparison.dg.reliability.values[last],
        comparison.wind_diesel.reliability.values[last],
    ));
    Ok(())
}

fn run_portfolio(cfg: &RunConfig, name: &str, u: &mut Unit) -> Result<()> {
    let case = build_portfolio(cfg, name)?;
    let s = aggregate_portfolio(&case)?;
    let stem = file_stem(name);
    u.write(format!("series_{stem}.csv"), &s.to_csv())?;
    u.write(format!("duration_{stem}.csv"), &duration_csv(s.values()))?;
    u.write(format!("delta_{stem}.csv"), &delta_csv(&s))?;
    let r = variation_range(&s);
    u.notes.push(format!(
        "mean output {:.4}; variation range {:.2} to {:.2} pp",
        s.mean(),
        r.max,
        r.min
    ));
    Ok(())
}

/// Summary of every portfolio's variation range, plus a case×scenario pivot
/// when every portfolio carries both labels.
fn run_ranges(cfg: &RunConfig, u: &mut Unit) -> Result<()> {
    let mut s = String::from("portfolio,label,case,scenario,mean_fraction,max_pp,min_pp,width_pp\n");
    let mut pivot: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut scenarios: Vec<String> = Vec::new();
    let mut complete = true;
    for (name, p) in &cfg.portfolios {
        let case = build_portfolio(cfg, name)?;
        let series = aggregate_portfolio(&case)?;
        let r = variation_range(&series);
        s.push_str(&format!(
            "{name},{},{},{},{},{},{},{}\n",
            case.label,
            p.case.as_deref().unwrap_or(""),
            p.scenario.as_deref().unwrap_or(""),
            series.mean(),
            r.max,
            r.min,
            r.width()
        ));
        match (&p.case, &p.scenario) {
            (Some(c), Some(sc)) => {
                if !scenarios.contains(sc) {
                    scenarios.push(sc.clone());
                }
                pivot
                    .entry(c.clone())
                    .or_default()
                    .insert(sc.clone(), format!("{:.2} to {:.2}", r.max, r.min));
            }
            _ => complete = false,
        }
    }
    u.write("ranges.csv".into(), &s)?;
    if complete && !pivot.is_empty() {
        scenarios.sort_by_key(|s| Scenario::parse(s).map_or(u8::MAX, |x| x as u8));
        let mut t = String::from("case");
        for sc in &scenarios {
            t.push_str(&format!(",Scenario-{sc}"));
        }
        t.push('\n');
        for (c, row) in &pivot {
            t.push_str(&format!("Case-{c}"));
            for sc in &scenarios {
                t.push(',');
                t.push_str(row.get(sc).map_or("", String::as_str));
            }
            t.push('\n');
        }
        u.write("ranges_table.csv".into(), &t)?;
    }
    Ok(())
}

fn run_credit(cfg: &RunConfig, name: &str, u: &mut Unit) -> Result<()> {
    let c = &cfg.credits[name];
    let window = cfg.window(&c.window)?;
    let history = match (&c.history, &c.portfolio) {
        (Some(path), _) => {
            let path = cfg.resolve_path(path);
            let f = File::open(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            read_hourly_history(f).map_err(|e| e.context(path.display().to_string()))?
        }
        (None, Some(p)) => {
            let series = aggregate_portfolio(&build_portfolio(cfg, p)?)?;
            let mut m = [[0.0; HOURS]; MONTHS];
            for (k, v) in series.values().iter().enumerate() {
                m[k / HOURS][k % HOURS] = *v;
            }
            u.warnings
                .push("climatology input: the same month-hour value stands for every day of each year".into());
            GenerationHistory::new(
                c.years
                    .iter()
                    .map(|&y| (y, YearData::Climatology(Box::new(m))))
                    .collect(),
            )?
        }
        (None, None) => unreachable!("validated"),
    };
    let mut kept = Vec::new();
    for (y, d) in history.years() {
        match window_capacity_factor(*y, d, &window) {
            Err(Error::EmptyWindow) => u.warnings.push(format!("{y}: no samples inside the peak window, year skipped")),
            _ => kept.push((*y, d.clone())),
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let history = GenerationHistory::new(kept)?;
    let stem = file_stem(name);
    let table = credit_table(name, &history, &window)?;
    u.write(format!("credit_{stem}.csv"), &credit_report_csv(&[table]))?;
    let rolling = pjm_rolling_credit(&history, &window)?;
    let mut s = String::from("year,credit,provisional,years_used,replacement_mw\n");
    for r in &rolling {
        let repl = match c.installed_mw {
            Some(mw) => replacement_capacity(mw, r.credit)?.to_string(),
            None => String::new(),
        };
        let used: Vec<String> = r.years_used.iter().map(i32::to_string).collect();
        s.push_str(&format!("{},{},{},{},{repl}\n", r.year, r.credit, r.provisional, used.join(";")));
        if r.provisional {
            u.warnings.push(format!("{}: provisional, only {} year(s) available", r.year, r.years_used.len()));
        }
    }
    u.write(format!("credit_{stem}_rolling.csv"), &s)
}

fn run_lcoe(cfg: &RunConfig, name: &str, u: &mut Unit) -> Result<()> {
    let m = cfg.cost_model(name)?;
    let stem = file_stem(name);
    let ledger = build_ledger(&m)?;
    u.write(format!("ledger_{stem}.csv"), &ledger.to_csv())?;
    u.notes.push(format!("LCOE {:.4} $/MWh", model_lcoe(&m)?));
    if cfg.options.sweeps {
        let mut s = String::from("parameter,value,lcoe\n");
        for p in SweepParameter::ALL {
            for (v, l) in sensitivity_sweep(&m, p, &p.default_grid())? {
                s.push_str(&format!("{},{v},{l}\n", p.name()));
            }
        }
        u.write(format!("sweep_{stem}.csv"), &s)?;
    }
    Ok(())
}

fn run_compare(cfg: &RunConfig, name: &str, u: &mut Unit) -> Result<()> {
    let c = &cfg.comparisons[name];
    let base = cfg.cost_model(&c.base)?;
    let (case_a, case_b) = match (&c.scenario, &c.case_a, &c.case_b) {
        (Some(s), _, _) => {
            let sc = Scenario::parse(s).ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))?;
            let cf = scenario_capacity_factors(sc)?;
            u.notes.push(format!(
                "capacity factors: Zafarana existing {:.4}, Zafarana new {:.4}, El Dabaa new {:.4}",
                cf.zafarana_old, cf.zafarana_new, cf.dabaa_new
            ));
            coupling_cases(&cf, &base, c.plant_mw)
        }
        (None, Some(a), Some(b)) => (
            a.iter()
                .map(|r| Ok(CoupledPlant { model: cfg.cost_model(&r.model)?, coupled: r.coupled }))
                .collect::<Result<Vec<_>>>()?,
            b.iter().map(|m| cfg.cost_model(m)).collect::<Result<Vec<_>>>()?,
        ),
        _ => unreachable!("validated"),
    };
    let preset = CouplingAdjustments::coupling_preset();
    let adj = CouplingAdjustments {
        capital_reductions: c.capital_reductions.clone().unwrap_or(preset.capital_reductions),
        om_reductions: c.om_reductions.clone().unwrap_or(preset.om_reductions),
        aspects: preset.aspects,
    };
    let matrix = coupling_compare(&case_a, &case_b, &adj)?;
    u.write(format!("compare_{}.csv", file_stem(name)), &matrix.to_csv())?;
    for &om in &adj.om_reductions {
        let note = match exact_breakeven(&case_a, &case_b, om)? {
            Some(x) => format!("O&M reduction {:.0}%: breakeven capital reduction {:.2}%", om * 100.0, x * 100.0),
            None => format!("O&M reduction {:.0}%: no capital reduction below 100% breaks even", om * 100.0),
        };
        u.notes.push(note);
    }
    Ok(())
}
