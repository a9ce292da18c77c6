//! Levelized cost of energy from a year-by-year cash-flow ledger, parameter
//! sweeps, and the comparison of a coupled (cost-reduced) portfolio against a
//! conventional one.

use serde::{Deserialize, Serialize};

use crate::aggregation::series_from_site;
use crate::error::{Error, Result};
use crate::presets::{self, Scenario};

pub const HOURS_PER_YEAR: f64 = 8760.0;

fn default_discount_rate() -> f64 {
    0.08
}
fn default_construction_years() -> u32 {
    1
}
fn default_lifetime_years() -> u32 {
    20
}

/// Cost inputs for one plant. Currency is 2008 US$.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantCostModel {
    /// MW
    pub capacity: f64,
    pub capacity_factor: f64,
    /// $/kW
    pub capital_cost: f64,
    /// $/year, charged in operating years only
    #[serde(default)]
    pub fixed_om: f64,
    /// $/MWh
    pub variable_om: f64,
    /// $/MWh
    #[serde(default)]
    pub fuel_cost: f64,
    #[serde(default = "default_discount_rate")]
    pub discount_rate: f64,
    #[serde(default = "default_construction_years")]
    pub construction_years: u32,
    #[serde(default = "default_lifetime_years")]
    pub lifetime_years: u32,
}

impl PlantCostModel {
    /// Median onshore plant of an international survey: 45 MW, capacity
    /// factor 25.7 %, $2348.64/kW, $21.92/MWh, at the default 8 % rate over
    /// one construction year and twenty operating years.
    pub fn median() -> Self {
        Self {
            capacity: 45.0,
            capacity_factor: 0.257,
            capital_cost: 2348.64,
            fixed_om: 0.0,
            variable_om: 21.92,
            fuel_cost: 0.0,
            discount_rate: default_discount_rate(),
            construction_years: default_construction_years(),
            lifetime_years: default_lifetime_years(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let money = [
            ("capacity", self.capacity),
            ("capital_cost", self.capital_cost),
            ("fixed_om", self.fixed_om),
            ("variable_om", self.variable_om),
            ("fuel_cost", self.fuel_cost),
        ];
        for (name, v) in money {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, "must be finite and non-negative"));
            }
        }
        if !(0.0..=1.0).contains(&self.capacity_factor) {
            return Err(Error::invalid("capacity_factor", "must lie in [0, 1]"));
        }
        if !(0.0..1.0).contains(&self.discount_rate) {
            return Err(Error::invalid("discount_rate", "must lie in [0, 1)"));
        }
        if self.construction_years < 1 || self.lifetime_years < 1 {
            return Err(Error::invalid("construction_years/lifetime_years", "must be at least 1"));
        }
        Ok(())
    }

    /// Total investment, $.
    pub fn investment(&self) -> f64 {
        1000.0 * self.capacity * self.capital_cost
    }

    /// Energy per operating year, MWh.
    pub fn annual_energy(&self) -> f64 {
        self.capacity * self.capacity_factor * HOURS_PER_YEAR
    }

    pub fn total_years(&self) -> u32 {
        self.construction_years + self.lifetime_years
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    /// 1-based
    pub year: u32,
    pub capital: f64,
    pub fixed_om: f64,
    pub variable_om: f64,
    pub fuel: f64,
    pub total: f64,
    pub energy: f64,
    pub discounted_cost: f64,
    pub discounted_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CashflowLedger {
    pub rows: Vec<LedgerRow>,
    pub discount_rate: f64,
}

/// Costs are discounted to the start of the first year; energy to the middle
/// of the year in which it is produced.
fn cost_factor(r: f64, year: u32) -> f64 {
    (1.0 + r).powf(f64::from(year) - 1.0)
}

fn energy_factor(r: f64, year: u32) -> f64 {
    (1.0 + r).powf(f64::from(year) - 0.5)
}

impl CashflowLedger {
    pub fn total_discounted_cost(&self) -> f64 {
        self.rows.iter().map(|r| r.discounted_cost).sum()
    }

    pub fn total_discounted_energy(&self) -> f64 {
        self.rows.iter().map(|r| r.discounted_energy).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "year,capital,fixed_om,variable_om,fuel,total,energy,discounted_cost,discounted_energy\n",
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.year,
                r.capital,
                r.fixed_om,
                r.variable_om,
                r.fuel,
                r.total,
                r.energy,
                r.discounted_cost,
                r.discounted_energy
            ));
        }
        s
    }
}

pub fn build_ledger(m: &PlantCostModel) -> Result<CashflowLedger> {
    m.validate()?;
    let r = m.discount_rate;
    let build = m.construction_years;
    let capital_per_year = m.investment() / f64::from(build);
    let annual_energy = m.annual_energy();
    let rows = (1..=m.total_years())
        .map(|year| {
            let constructing = year <= build;
            let capital = if constructing { capital_per_year } else { 0.0 };
            let energy = if constructing { 0.0 } else { annual_energy };
            let fixed_om = if constructing { 0.0 } else { m.fixed_om };
            let variable_om = energy * m.variable_om;
            let fuel = energy * m.fuel_cost;
            let total = capital + fixed_om + variable_om + fuel;
            LedgerRow {
                year,
                capital,
                fixed_om,
                variable_om,
                fuel,
                total,
                energy,
                discounted_cost: total / cost_factor(r, year),
                discounted_energy: energy / energy_factor(r, year),
            }
        })
        .collect();
    Ok(CashflowLedger { rows, discount_rate: r })
}

/// Constant energy price, $/MWh, that recovers the discounted costs.
pub fn lcoe(ledger: &CashflowLedger, discount_rate: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&discount_rate) {
        return Err(Error::invalid("discount_rate", "must lie in [0, 1)"));
    }
    let (cost, energy) = ledger.rows.iter().fold((0.0, 0.0), |(c, e), row| {
        (
            c + row.total / cost_factor(discount_rate, row.year),
            e + row.energy / energy_factor(discount_rate, row.year),
        )
    });
    if !(energy > 0.0) {
        return Err(Error::UndefinedLcoe);
    }
    Ok(cost / energy)
}

pub fn model_lcoe(m: &PlantCostModel) -> Result<f64> {
    lcoe(&build_ledger(m)?, m.discount_rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    VariableOm,
    DiscountRate,
    CapacityFactor,
    CapitalCost,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 4] = [
        SweepParameter::VariableOm,
        SweepParameter::DiscountRate,
        SweepParameter::CapacityFactor,
        SweepParameter::CapitalCost,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::VariableOm => "variable_om",
            SweepParameter::DiscountRate => "discount_rate",
            SweepParameter::CapacityFactor => "capacity_factor",
            SweepParameter::CapitalCost => "capital_cost",
        }
    }

    pub fn apply(self, base: &PlantCostModel, v: f64) -> PlantCostModel {
        let mut m = *base;
        match self {
            SweepParameter::VariableOm => m.variable_om = v,
            SweepParameter::DiscountRate => m.discount_rate = v,
            SweepParameter::CapacityFactor => m.capacity_factor = v,
            SweepParameter::CapitalCost => m.capital_cost = v,
        }
        m
    }

    /// Grid spanning the observed range of onshore plants.
    pub fn default_grid(self) -> Vec<f64> {
        let (lo, hi, n) = match self {
            SweepParameter::VariableOm => (5.0, 45.0, 9),
            SweepParameter::DiscountRate => (0.0, 0.15, 16),
            SweepParameter::CapacityFactor => (0.15, 0.45, 13),
            SweepParameter::CapitalCost => (1500.0, 4000.0, 11),
        };
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// LCOE at each grid value with every other input held at `base`.
pub fn sensitivity_sweep(base: &PlantCostModel, p: SweepParameter, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must be non-empty"));
    }
    grid.iter()
        .map(|&v| {
            let m = p.apply(base, v);
            model_lcoe(&m)
                .map(|l| (v, l))
                .map_err(|e| e.context(format!("{} = {v}", p.name())))
        })
        .collect()
}

pub fn sweep_csv(p: SweepParameter, points: &[(f64, f64)]) -> String {
    let mut s = format!("{},lcoe\n", p.name());
    for (v, l) in points {
        s.push_str(&format!("{v},{l}\n"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostDirection {
    Increase,
    Decrease,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostTarget {
    Capital,
    Om,
}

/// One coupling aspect and its projected effect, as a percentage range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingAspect {
    pub name: String,
    pub direction: CostDirection,
    pub target: CostTarget,
    pub low_pct: f64,
    pub high_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Netting {
    /// Decreases only.
    Gross,
    /// Decreases minus increases.
    Net,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingAdjustments {
    /// Fractions in [0, 1).
    pub capital_reductions: Vec<f64>,
    pub om_reductions: Vec<f64>,
    #[serde(default)]
    pub aspects: Vec<CouplingAspect>,
}

fn aspect(name: &str, direction: CostDirection, target: CostTarget, low: f64, high: f64) -> CouplingAspect {
    CouplingAspect {
        name: name.into(),
        direction,
        target,
        low_pct: low,
        high_pct: high,
    }
}

impl CouplingAdjustments {
    /// Capital reductions 0–70 % in 5 % steps, O&M reductions 0–30 % in
    /// 10 % steps, and the projected per-aspect effects of coupling.
    pub fn coupling_preset() -> Self {
        use CostDirection::*;
        use CostTarget::*;
        Self {
            capital_reductions: (0..=14).map(|i| f64::from(i) * 0.05).collect(),
            om_reductions: vec![0.0, 0.1, 0.2, 0.3],
            aspects: vec![
                aspect("Availability of land with cheap prices", Decrease, Capital, 5.0, 5.0),
                aspect("Existence of connection to grid", Decrease, Capital, 0.0, 10.0),
                aspect("Existence of infrastructure required for WF", Decrease, Capital, 5.0, 5.0),
                aspect("Smoothing effect of aggregated wind energy", Decrease, Om, 10.0, 10.0),
                aspect("Voltage variations at PCC", Decrease, Capital, 5.0, 5.0),
                aspect("Reactive power control capability", Decrease, Capital, 30.0, 40.0),
                aspect("WF switch gear", Increase, Capital, 5.0, 5.0),
                aspect("Filters for WF harmonics", Increase, Capital, 5.0, 5.0),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grids = [("capital_reductions", &self.capital_reductions), ("om_reductions", &self.om_reductions)];
        for (name, g) in grids {
            if g.is_empty() {
                return Err(Error::invalid(name, "must be non-empty"));
            }
            if g.iter().any(|x| !(0.0..1.0).contains(x)) {
                return Err(Error::invalid(name, "reductions must lie in [0, 1)"));
            }
        }
        for a in &self.aspects {
            if !(0.0 <= a.low_pct && a.low_pct <= a.high_pct) {
                return Err(Error::invalid("aspect", format!("`{}`: need 0 <= low <= high", a.name)));
            }
        }
        Ok(())
    }

    /// Aggregate (low, high) reduction in percent for one cost target.
    pub fn aggregate_reduction(&self, target: CostTarget, netting: Netting) -> (f64, f64) {
        self.aspects
            .iter()
            .filter(|a| a.target == target)
            .fold((0.0, 0.0), |(lo, hi), a| match (a.direction, netting) {
                (CostDirection::Decrease, _) => (lo + a.low_pct, hi + a.high_pct),
                (CostDirection::Increase, Netting::Net) => (lo - a.high_pct, hi - a.low_pct),
                (CostDirection::Increase, Netting::Gross) => (lo, hi),
            })
    }
}

/// A plant in the coupled case; `coupled` plants receive the reductions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledPlant {
    pub model: PlantCostModel,
    pub coupled: bool,
}

impl CoupledPlant {
    /// Cost model after the reductions; unchanged unless `coupled`.
    pub fn adjusted(&self, capital_reduction: f64, om_reduction: f64) -> PlantCostModel {
        if !self.coupled {
            return self.model;
        }
        PlantCostModel {
            capital_cost: self.model.capital_cost * (1.0 - capital_reduction),
            fixed_om: self.model.fixed_om * (1.0 - om_reduction),
            variable_om: self.model.variable_om * (1.0 - om_reduction),
            ..self.model
        }
    }
}

/// Total discounted cost over total discounted energy across plants.
pub fn portfolio_lcoe(plants: &[PlantCostModel]) -> Result<f64> {
    if plants.is_empty() {
        return Err(Error::invalid("portfolio", "no plants"));
    }
    let (c, e) = plants.iter().try_fold((0.0, 0.0), |(c, e), p| {
        let l = build_ledger(p)?;
        Ok::<_, Error>((c + l.total_discounted_cost(), e + l.total_discounted_energy()))
    })?;
    if !(e > 0.0) {
        return Err(Error::UndefinedLcoe);
    }
    Ok(c / e)
}

fn case_a_models(case_a: &[CoupledPlant], capital_reduction: f64, om_reduction: f64) -> Vec<PlantCostModel> {
    case_a.iter().map(|p| p.adjusted(capital_reduction, om_reduction)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonCell {
    pub capital_reduction: f64,
    pub om_reduction: f64,
    pub lcoe_a: f64,
    pub lcoe_b: f64,
    /// Case A no dearer than Case B.
    pub breakeven: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    pub cells: Vec<ComparisonCell>,
}

impl ComparisonMatrix {
    /// Smallest grid capital reduction at which Case A is no dearer.
    pub fn grid_breakeven(&self, om_reduction: f64) -> Option<f64> {
        self.cells
            .iter()
            .filter(|c| c.om_reduction == om_reduction && c.breakeven)
            .map(|c| c.capital_reduction)
            .min_by(f64::total_cmp)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("capital_reduction,om_reduction,lcoe_a,lcoe_b,breakeven\n");
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                c.capital_reduction, c.om_reduction, c.lcoe_a, c.lcoe_b, c.breakeven
            ));
        }
        s
    }
}

pub fn coupling_compare(
    case_a: &[CoupledPlant],
    case_b: &[PlantCostModel],
    adj: &CouplingAdjustments,
) -> Result<ComparisonMatrix> {
    adj.validate()?;
    let lcoe_b = portfolio_lcoe(case_b).map_err(|e| e.context("case B LCOE"))?;
    let mut cells = Vec::with_capacity(adj.om_reductions.len() * adj.capital_reductions.len());
    for &om in &adj.om_reductions {
        for &cap in &adj.capital_reductions {
            let lcoe_a = portfolio_lcoe(&case_a_models(case_a, cap, om)).map_err(|e| e.context("case A LCOE"))?;
            cells.push(ComparisonCell {
                capital_reduction: cap,
                om_reduction: om,
                lcoe_a,
                lcoe_b,
                breakeven: lcoe_a <= lcoe_b,
            });
        }
    }
    Ok(ComparisonMatrix { cells })
}

/// Exact capital reduction at which the two cases cost the same, for a given
/// O&M reduction. Case A's LCOE is affine in the capital reduction, so the
/// crossing follows from two evaluations. `None` when no reduction in [0, 1)
/// suffices; `Some(0.0)` when Case A is already no dearer.
pub fn exact_breakeven(case_a: &[CoupledPlant], case_b: &[PlantCostModel], om_reduction: f64) -> Result<Option<f64>> {
    if !(0.0..1.0).contains(&om_reduction) {
        return Err(Error::invalid("om_reduction", "must lie in [0, 1)"));
    }
    let lb = portfolio_lcoe(case_b)?;
    let l0 = portfolio_lcoe(&case_a_models(case_a, 0.0, om_reduction))?;
    if l0 <= lb {
        return Ok(Some(0.0));
    }
    let l1 = portfolio_lcoe(&case_a_models(case_a, 1.0, om_reduction))?;
    if l1 >= lb {
        return Ok(None);
    }
    Ok(Some((l0 - lb) / (l0 - l1)))
}

/// Capacity factors feeding the coupling comparison for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioCapacityFactors {
    pub zafarana_old: f64,
    pub zafarana_new: f64,
    pub dabaa_new: f64,
}

pub fn scenario_capacity_factors(s: Scenario) -> Result<ScenarioCapacityFactors> {
    let zaf = presets::zafarana_site();
    Ok(ScenarioCapacityFactors {
        zafarana_old: series_from_site(&zaf, &presets::old_zafarana_curve())?.mean(),
        zafarana_new: series_from_site(&zaf, &presets::scenario_curve(s))?.mean(),
        dabaa_new: series_from_site(&presets::galala_site(), &presets::scenario_curve(s))?.mean(),
    })
}

/// Case A: existing Zafarana plant at median cost plus a coupled El Dabaa
/// plant. Case B: existing plus a new Zafarana plant, both at median cost.
pub fn coupling_cases(
    cf: &ScenarioCapacityFactors,
    base: &PlantCostModel,
    plant_mw: f64,
) -> (Vec<CoupledPlant>, Vec<PlantCostModel>) {
    let plant = |capacity_factor| PlantCostModel {
        capacity: plant_mw,
        capacity_factor,
        ..*base
    };
    let old = plant(cf.zafarana_old);
    (
        vec![
            CoupledPlant { model: old, coupled: false },
            CoupledPlant { model: plant(cf.dabaa_new), coupled: true },
        ],
        vec![old, plant(cf.zafarana_new)],
    )
}
