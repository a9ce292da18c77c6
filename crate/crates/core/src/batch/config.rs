use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::credit::PeakWindow;
use crate::economics::PlantCostModel;
use crate::error::{Error, Result};
use crate::markov::{DieselRates, MarkovModel, WindTurbineRates};
use crate::presets;
use crate::voltage::{GridPoint, TurbinePQData, DEFAULT_DSS_LIMIT};
use crate::wind::{ingest_wind_table, SiteProfile, TurbinePowerCurve, WeibullParams, DEFAULT_SHEAR_EXPONENT};

const BUILTIN: &str = "builtin:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisKind {
    Pq,
    Reliability,
    Aggregate,
    Credit,
    Lcoe,
    Compare,
}

impl AnalysisKind {
    pub const ALL: [AnalysisKind; 6] = [
        AnalysisKind::Pq,
        AnalysisKind::Reliability,
        AnalysisKind::Aggregate,
        AnalysisKind::Credit,
        AnalysisKind::Lcoe,
        AnalysisKind::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::Pq => "pq",
            AnalysisKind::Reliability => "reliability",
            AnalysisKind::Aggregate => "aggregate",
            AnalysisKind::Credit => "credit",
            AnalysisKind::Lcoe => "lcoe",
            AnalysisKind::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PqDisplay {
    /// Per-unit values.
    #[default]
    Fraction,
    /// Per-unit values × 100.
    Percent,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub pq_display: PqDisplay,
    /// Emit the four LCOE sensitivity sweeps per cost model.
    #[serde(default = "yes")]
    pub sweeps: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            pq_display: PqDisplay::Fraction,
            sweeps: true,
        }
    }
}

fn default_reference_height() -> f64 {
    presets::CLIMATOLOGY_HEIGHT
}
fn default_shear() -> f64 {
    DEFAULT_SHEAR_EXPONENT
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    /// `builtin:<name>` or a CSV path relative to the config file.
    pub data: String,
    #[serde(default = "default_reference_height")]
    pub reference_height: f64,
    #[serde(default = "default_shear")]
    pub shear_exponent: f64,
    pub weibull: Option<WeibullParams>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PqTurbineConfig {
    /// `builtin:<name>` or a TOML path relative to the config file.
    pub data: String,
}

fn default_dss_limit() -> f64 {
    DEFAULT_DSS_LIMIT
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PqScenarioConfig {
    pub turbine: String,
    pub grid: String,
    pub annual_mean_speed: f64,
    pub n_turbines: u32,
    #[serde(default = "default_dss_limit")]
    pub dss_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModelConfig {
    pub labels: Vec<String>,
    /// Column convention: `generator[to][from]`.
    pub generator: Vec<Vec<f64>>,
    pub success_states: Vec<usize>,
    pub initial: Vec<f64>,
}

impl CustomModelConfig {
    pub fn to_model(&self) -> MarkovModel {
        MarkovModel {
            state_labels: self.labels.clone(),
            generator: self.generator.clone(),
            success_states: self.success_states.clone(),
            initial_distribution: self.initial.clone(),
        }
    }
}

fn default_horizon() -> f64 {
    1000.0
}
fn default_points() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovConfig {
    #[serde(default = "default_horizon")]
    pub horizon_h: f64,
    /// Number of intervals on the output grid.
    #[serde(default = "default_points")]
    pub intervals: usize,
    /// Wind–diesel study: turbine power curve name.
    pub turbine: Option<String>,
    /// Site whose Weibull fit drives the wind-region terms.
    pub site: Option<String>,
    pub weibull: Option<WeibullParams>,
    pub diesel: Option<DieselRates>,
    pub wind_turbine: Option<WindTurbineRates>,
    pub wf_capacity_mw: Option<f64>,
    pub min_mw: Option<f64>,
    /// Arbitrary model instead of the wind–diesel study.
    pub model: Option<CustomModelConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub site: String,
    pub turbine: String,
    pub installed_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortfolioConfig {
    pub label: Option<String>,
    /// Row label of the ranges table.
    pub case: Option<String>,
    /// Column label of the ranges table.
    pub scenario: Option<String>,
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeakWindowConfig {
    pub months: Vec<u32>,
    pub hours: Vec<u32>,
}

fn default_window() -> String {
    "egypt".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreditConfig {
    #[serde(default = "default_window")]
    pub window: String,
    /// Hourly `timestamp,output_fraction` CSV, relative to the config file.
    pub history: Option<String>,
    /// Portfolio whose climatology stands in for every year in `years`.
    pub portfolio: Option<String>,
    #[serde(default)]
    pub years: Vec<i32>,
    pub installed_mw: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledPlantRef {
    pub model: String,
    #[serde(default)]
    pub coupled: bool,
}

fn default_base() -> String {
    "median".into()
}
fn default_plant_mw() -> f64 {
    presets::PLANT_MW
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConfig {
    /// Derive both cases from a smoothing scenario's capacity factors.
    pub scenario: Option<String>,
    #[serde(default = "default_base")]
    pub base: String,
    #[serde(default = "default_plant_mw")]
    pub plant_mw: f64,
    pub case_a: Option<Vec<CoupledPlantRef>>,
    pub case_b: Option<Vec<String>>,
    pub capital_reductions: Option<Vec<f64>>,
    pub om_reductions: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub analyses: Vec<AnalysisKind>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub sites: BTreeMap<String, SiteConfig>,
    #[serde(default)]
    pub turbines: BTreeMap<String, TurbinePowerCurve>,
    #[serde(default)]
    pub pq_turbines: BTreeMap<String, PqTurbineConfig>,
    #[serde(default)]
    pub grid_points: BTreeMap<String, GridPoint>,
    #[serde(default)]
    pub pq_scenarios: BTreeMap<String, PqScenarioConfig>,
    #[serde(default)]
    pub markov: BTreeMap<String, MarkovConfig>,
    #[serde(default)]
    pub portfolios: BTreeMap<String, PortfolioConfig>,
    #[serde(default)]
    pub peak_windows: BTreeMap<String, PeakWindowConfig>,
    #[serde(default)]
    pub credits: BTreeMap<String, CreditConfig>,
    #[serde(default)]
    pub cost_models: BTreeMap<String, PlantCostModel>,
    #[serde(default)]
    pub comparisons: BTreeMap<String, ComparisonConfig>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

pub const PRESETS: [(&str, &str); 3] = [
    ("dabaa-zafarana", include_str!("../../presets/dabaa-zafarana.toml")),
    ("table-3.5-scenarios", include_str!("../../presets/table-3.5-scenarios.toml")),
    ("case-ab", include_str!("../../presets/case-ab.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Reads and validates a config file; relative paths inside resolve against
/// the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, base).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn load_preset(name: &str) -> Result<RunConfig> {
    let text = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            Error::Config(format!(
                "unknown preset `{name}` (available: {})",
                preset_names().collect::<Vec<_>>().join(", ")
            ))
        })?;
    parse_config(text, PathBuf::from(".")).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("preset {name}: {m}")),
        other => other,
    })
}

pub fn parse_config(text: &str, base_dir: PathBuf) -> Result<RunConfig> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.base_dir = base_dir;
    cfg.validate()?;
    Ok(cfg)
}

fn dangling(at: String, kind: &str, name: &str) -> Error {
    Error::Config(format!("{at}: unknown {kind} `{name}`"))
}

fn strip_builtin(s: &str) -> Option<&str> {
    s.strip_prefix(BUILTIN)
}

impl RunConfig {
    fn has_site(&self, n: &str) -> bool {
        self.sites.contains_key(n) || presets::site_by_name(n).is_some()
    }
    fn has_turbine(&self, n: &str) -> bool {
        self.turbines.contains_key(n) || builtin_turbine(n).is_some()
    }
    fn has_pq_turbine(&self, n: &str) -> bool {
        self.pq_turbines.contains_key(n) || presets::pq_by_name(n).is_some()
    }
    fn has_grid(&self, n: &str) -> bool {
        self.grid_points.contains_key(n) || builtin_grid(n).is_some()
    }
    fn has_window(&self, n: &str) -> bool {
        self.peak_windows.contains_key(n) || PeakWindow::by_name(n).is_some()
    }
    fn has_cost_model(&self, n: &str) -> bool {
        self.cost_models.contains_key(n) || n == "median"
    }

    /// Cross-reference and required-input checks.
    pub fn validate(&self) -> Result<()> {
        for (n, s) in &self.sites {
            if let Some(b) = strip_builtin(&s.data) {
                if presets::site_by_name(b).is_none() {
                    return Err(dangling(format!("sites.{n}.data"), "builtin site", b));
                }
            }
        }
        for (n, t) in &self.pq_turbines {
            if let Some(b) = strip_builtin(&t.data) {
                if presets::pq_by_name(b).is_none() {
                    return Err(dangling(format!("pq_turbines.{n}.data"), "builtin turbine sheet", b));
                }
            }
        }
        for (n, s) in &self.pq_scenarios {
            if !self.has_pq_turbine(&s.turbine) {
                return Err(dangling(format!("pq_scenarios.{n}.turbine"), "turbine sheet", &s.turbine));
            }
            if !self.has_grid(&s.grid) {
                return Err(dangling(format!("pq_scenarios.{n}.grid"), "grid point", &s.grid));
            }
        }
        for (n, m) in &self.markov {
            let at = format!("markov.{n}");
            match (&m.model, &m.turbine) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(format!("{at}: give either `model` or `turbine`, not both")))
                }
                (None, None) => return Err(Error::Config(format!("{at}: needs `model` or `turbine`"))),
                (None, Some(t)) => {
                    if !self.has_turbine(t) {
                        return Err(dangling(format!("{at}.turbine"), "turbine", t));
                    }
                    match (&m.site, &m.weibull) {
                        (Some(s), None) => {
                            if !self.has_site(s) {
                                return Err(dangling(format!("{at}.site"), "site", s));
                            }
                        }
                        (None, Some(_)) => {}
                        _ => return Err(Error::Config(format!("{at}: give exactly one of `site` or `weibull`"))),
                    }
                    if m.min_mw.is_some() && m.wf_capacity_mw.is_none() {
                        return Err(Error::Config(format!("{at}: `min_mw` needs `wf_capacity_mw`")));
                    }
                }
                (Some(_), None) => {}
            }
        }
        for (n, p) in &self.portfolios {
            if p.components.is_empty() {
                return Err(Error::Config(format!("portfolios.{n}: no components")));
            }
            for (i, c) in p.components.iter().enumerate() {
                if !self.has_site(&c.site) {
                    return Err(dangling(format!("portfolios.{n}.components[{i}].site"), "site", &c.site));
                }
                if !self.has_turbine(&c.turbine) {
                    return Err(dangling(format!("portfolios.{n}.components[{i}].turbine"), "turbine", &c.turbine));
                }
            }
        }
        for (n, w) in &self.peak_windows {
            PeakWindow::new(w.months.iter().copied(), w.hours.iter().copied())
                .map_err(|e| Error::Config(format!("peak_windows.{n}: {e}")))?;
        }
        for (n, c) in &self.credits {
            let at = format!("credits.{n}");
            if !self.has_window(&c.window) {
                return Err(dangling(format!("{at}.window"), "peak window", &c.window));
            }
            match (&c.history, &c.portfolio) {
                (Some(_), None) => {}
                (None, Some(p)) => {
                    if !self.portfolios.contains_key(p) {
                        return Err(dangling(format!("{at}.portfolio"), "portfolio", p));
                    }
                    if c.years.is_empty() {
                        return Err(Error::Config(format!("{at}: climatology input needs `years`")));
                    }
                }
                _ => return Err(Error::Config(format!("{at}: give exactly one of `history` or `portfolio`"))),
            }
        }
        for (n, c) in &self.comparisons {
            let at = format!("comparisons.{n}");
            if !self.has_cost_model(&c.base) {
                return Err(dangling(format!("{at}.base"), "cost model", &c.base));
            }
            match (&c.scenario, &c.case_a, &c.case_b) {
                (Some(s), None, None) => {
                    if presets::Scenario::parse(s).is_none() {
                        return Err(dangling(format!("{at}.scenario"), "scenario", s));
                    }
                }
                (None, Some(a), Some(b)) => {
                    for r in a {
                        if !self.has_cost_model(&r.model) {
                            return Err(dangling(format!("{at}.case_a"), "cost model", &r.model));
                        }
                    }
                    for m in b {
                        if !self.has_cost_model(m) {
                            return Err(dangling(format!("{at}.case_b"), "cost model", m));
                        }
                    }
                }
                _ => {
                    return Err(Error::Config(format!(
                        "{at}: give either `scenario` or both `case_a` and `case_b`"
                    )))
                }
            }
        }
        for kind in &self.analyses {
            let empty = match kind {
                AnalysisKind::Pq => self.pq_scenarios.is_empty(),
                AnalysisKind::Reliability => self.markov.is_empty(),
                AnalysisKind::Aggregate => self.portfolios.is_empty(),
                AnalysisKind::Credit => self.credits.is_empty(),
                AnalysisKind::Lcoe => self.cost_models.is_empty(),
                AnalysisKind::Compare => self.comparisons.is_empty(),
            };
            if empty {
                return Err(Error::Config(format!("analysis `{}` selected but has no inputs", kind.name())));
            }
        }
        Ok(())
    }

    pub fn resolve_path(&self, p: &str) -> PathBuf {
        self.base_dir.join(p)
    }

    pub fn site(&self, name: &str) -> Result<SiteProfile> {
        let Some(cfg) = self.sites.get(name) else {
            return presets::site_by_name(name).ok_or_else(|| dangling("site".into(), "site", name));
        };
        let table = match strip_builtin(&cfg.data) {
            Some(b) => presets::site_by_name(b)
                .ok_or_else(|| dangling(format!("sites.{name}.data"), "builtin site", b))?
                .wind_table,
            None => {
                let path = self.resolve_path(&cfg.data);
                let f = File::open(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                ingest_wind_table(f, cfg.reference_height).map_err(|e| e.context(path.display().to_string()))?
            }
        };
        let table = crate::wind::WindSpeedTable::new(&table.site_name, cfg.reference_height, *table.matrix())?;
        SiteProfile::new(table, cfg.shear_exponent, cfg.weibull)
    }

    pub fn turbine(&self, name: &str) -> Result<TurbinePowerCurve> {
        let t = match self.turbines.get(name) {
            Some(t) => *t,
            None => builtin_turbine(name).ok_or_else(|| dangling("turbine".into(), "turbine", name))?,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn pq_turbine(&self, name: &str) -> Result<TurbinePQData> {
        let Some(cfg) = self.pq_turbines.get(name) else {
            return presets::pq_by_name(name).ok_or_else(|| dangling("pq turbine".into(), "turbine sheet", name));
        };
        match strip_builtin(&cfg.data) {
            Some(b) => presets::pq_by_name(b).ok_or_else(|| dangling("pq turbine".into(), "turbine sheet", b)),
            None => {
                let path = self.resolve_path(&cfg.data);
                let text =
                    std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                TurbinePQData::from_toml(&text).map_err(|e| e.context(path.display().to_string()))
            }
        }
    }

    pub fn grid(&self, name: &str) -> Result<GridPoint> {
        let g = match self.grid_points.get(name) {
            Some(g) => *g,
            None => builtin_grid(name).ok_or_else(|| dangling("grid".into(), "grid point", name))?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn window(&self, name: &str) -> Result<PeakWindow> {
        match self.peak_windows.get(name) {
            Some(w) => PeakWindow::new(w.months.iter().copied(), w.hours.iter().copied()),
            None => PeakWindow::by_name(name).ok_or_else(|| dangling("window".into(), "peak window", name)),
        }
    }

    pub fn cost_model(&self, name: &str) -> Result<PlantCostModel> {
        match self.cost_models.get(name) {
            Some(m) => Ok(*m),
            None if name == "median" => Ok(PlantCostModel::median()),
            None => Err(dangling("cost model".into(), "cost model", name)),
        }
    }
}

fn builtin_turbine(name: &str) -> Option<TurbinePowerCurve> {
    use presets::Scenario;
    match name {
        "scenario-i" => Some(presets::scenario_curve(Scenario::I)),
        "scenario-ii" => Some(presets::scenario_curve(Scenario::II)),
        "scenario-iii" => Some(presets::scenario_curve(Scenario::III)),
        "old-zafarana" => Some(presets::old_zafarana_curve()),
        "reliability" => Some(presets::reliability_curve()),
        _ => None,
    }
}

fn builtin_grid(name: &str) -> Option<GridPoint> {
    match name {
        "el-dabaa" => Some(presets::dabaa_grid()),
        "zafarana" => Some(presets::zafarana_grid()),
        _ => None,
    }
}
