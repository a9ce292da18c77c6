//! Browser bindings. Each export returns a JSON string for the page to plot.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use windsite_core::economics::{
    coupling_cases, exact_breakeven, portfolio_lcoe, scenario_capacity_factors, PlantCostModel,
};
use windsite_core::markov::{
    min_output_scenario, threshold_wind_speed, uniform_grid, DieselRates, StepControl, WindTurbineRates,
};
use windsite_core::presets::{self, Scenario};
use windsite_core::wind::{power_curve_coeffs, power_fraction, TurbinePowerCurve};

#[derive(Serialize)]
struct PowerCurveOut {
    speeds: Vec<f64>,
    fractions: Vec<f64>,
    a: f64,
    b: f64,
    c: f64,
    threshold_speed: Option<f64>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Power fraction on a 0.1 m/s grid up to 30 m/s, plus the speed at which
/// `min_fraction` of rated output is reached when it lies in (0, 1].
pub fn power_curve(cut_in: f64, rated: f64, cut_out: f64, min_fraction: f64) -> Result<String, String> {
    let curve = TurbinePowerCurve::new(cut_in, rated, cut_out, 1.0, 80.0).map_err(|e| e.to_string())?;
    let q = power_curve_coeffs(&curve).map_err(|e| e.to_string())?;
    let speeds: Vec<f64> = (0..=300).map(|i| f64::from(i) * 0.1).collect();
    let fractions = speeds.iter().map(|&v| power_fraction(v, &curve)).collect();
    let threshold_speed = if min_fraction > 0.0 && min_fraction <= 1.0 {
        Some(threshold_wind_speed(&curve, min_fraction).map_err(|e| e.to_string())?)
    } else {
        None
    };
    to_json(&PowerCurveOut {
        speeds,
        fractions,
        a: q.a,
        b: q.b,
        c: q.c,
        threshold_speed,
    })
}

#[derive(Serialize)]
struct ReliabilityOut {
    times: Vec<f64>,
    threshold_speed: f64,
    dg_availability: Vec<f64>,
    dg_reliability: Vec<f64>,
    wt_availability: Vec<f64>,
    wt_reliability: Vec<f64>,
    wind_diesel_availability: Vec<f64>,
    wind_diesel_reliability: Vec<f64>,
}

/// Diesel-only versus wind–diesel curves for a 100 MW farm in two trains
/// that must each deliver `min_mw`.
pub fn reliability(min_mw: f64, horizon_h: f64) -> Result<String, String> {
    let times = uniform_grid(horizon_h, 200);
    let s = min_output_scenario(
        100.0,
        min_mw,
        &presets::reliability_curve(),
        &presets::dabaa_weibull(),
        &WindTurbineRates::TABLE_DEFAULT,
        &DieselRates::TABLE_DEFAULT,
        &times,
        &StepControl::default(),
    )
    .map_err(|e| e.to_string())?;
    let c = s.comparison;
    to_json(&ReliabilityOut {
        times: c.times,
        threshold_speed: s.threshold_speed,
        dg_availability: c.dg.availability.values,
        dg_reliability: c.dg.reliability.values,
        wt_availability: c.wt.availability.values,
        wt_reliability: c.wt.reliability.values,
        wind_diesel_availability: c.wind_diesel.availability.values,
        wind_diesel_reliability: c.wind_diesel.reliability.values,
    })
}

#[derive(Serialize)]
struct CouplingOut {
    capital_reductions: Vec<f64>,
    lcoe_a: Vec<f64>,
    lcoe_b: f64,
    breakeven: Option<f64>,
    capacity_factor_dabaa: f64,
    capacity_factor_zafarana: f64,
}

/// LCOE of both cases against El Dabaa capital reduction (0–90 %) at the
/// given O&M reduction, with the exact breakeven.
pub fn coupling(scenario: &str, om_reduction: f64, lifetime_years: u32) -> Result<String, String> {
    let s = Scenario::parse(scenario).ok_or_else(|| format!("unknown scenario `{scenario}`"))?;
    let cf = scenario_capacity_factors(s).map_err(|e| e.to_string())?;
    let base = PlantCostModel {
        lifetime_years,
        ..PlantCostModel::median()
    };
    let (a, b) = coupling_cases(&cf, &base, presets::PLANT_MW);
    let lcoe_b = portfolio_lcoe(&b).map_err(|e| e.to_string())?;
    let capital_reductions: Vec<f64> = (0..=90).map(|i| f64::from(i) / 100.0).collect();
    let lcoe_a = capital_reductions
        .iter()
        .map(|&x| {
            let plants: Vec<PlantCostModel> = a.iter().map(|p| p.adjusted(x, om_reduction)).collect();
            portfolio_lcoe(&plants).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let breakeven = exact_breakeven(&a, &b, om_reduction).map_err(|e| e.to_string())?;
    to_json(&CouplingOut {
        capital_reductions,
        lcoe_a,
        lcoe_b,
        breakeven,
        capacity_factor_dabaa: cf.dabaa_new,
        capacity_factor_zafarana: cf.zafarana_new,
    })
}

#[wasm_bindgen(js_name = powerCurve)]
pub fn power_curve_js(cut_in: f64, rated: f64, cut_out: f64, min_fraction: f64) -> Result<String, JsValue> {
    power_curve(cut_in, rated, cut_out, min_fraction).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = reliabilityCurves)]
pub fn reliability_js(min_mw: f64, horizon_h: f64) -> Result<String, JsValue> {
    reliability(min_mw, horizon_h).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = couplingComparison)]
pub fn coupling_js(scenario: &str, om_reduction: f64, lifetime_years: u32) -> Result<String, JsValue> {
    coupling(scenario, om_reduction, lifetime_years).map_err(|e| JsValue::from_str(&e))
}
