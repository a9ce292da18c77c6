//! Wind–diesel emergency supply: diesel generators alone versus diesel
//! generators in parallel with an on-site wind farm, optionally requiring a
//! minimum farm output.

use super::{
    availability, build_dg_model, build_wt_model, parallel_combine, reliability_curve,
    wind_transition_probs, DieselRates, StepControl, TimeSeries, WindTransitionProbs,
    WindTurbineRates,
};
use crate::error::{Error, Result};
use crate::wind::{power_curve_coeffs, TurbinePowerCurve, WeibullParams};

/// Lowest wind speed at which the turbine delivers `min_fraction` of rated
/// power, found from the positive root of the quadratic power-curve branch.
pub fn threshold_wind_speed(curve: &TurbinePowerCurve, min_fraction: f64) -> Result<f64> {
    if !(min_fraction > 0.0 && min_fraction <= 1.0) {
        return Err(Error::invalid("min_fraction", "must lie in (0, 1]"));
    }
    curve.validate()?;
    if min_fraction == 1.0 {
        return Ok(curve.rated_speed);
    }
    let q = power_curve_coeffs(curve)?;
    let (vi, vr) = (curve.cut_in, curve.rated_speed);
    // c·v² + b·v + (a − f) = 0
    let (a, b, c) = (q.a - min_fraction, q.b, q.c);
    let mut roots = Vec::with_capacity(2);
    if c.abs() < 1e-15 {
        roots.push(-a / b);
    } else {
        let disc = b * b - 4.0 * c * a;
        if disc >= 0.0 {
            let s = disc.sqrt();
            let t = -0.5 * (b + b.signum() * s);
            roots.push(t / c);
            if t != 0.0 {
                roots.push(a / t);
            }
        }
    }
    let span = vr - vi;
    roots
        .into_iter()
        .filter(|r| *r >= vi - 1e-9 * span && *r <= vr + 1e-9 * span)
        .map(|r| r.clamp(vi, vr))
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |m| m.min(r))))
        .ok_or_else(|| Error::invalid("min_fraction", "no crossing between cut-in and rated speed"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemCurves {
    pub availability: TimeSeries,
    pub reliability: TimeSeries,
}

/// Availability and reliability of the diesel set, the wind set and both in
/// parallel, on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WindDieselComparison {
    pub times: Vec<f64>,
    pub dg: SystemCurves,
    pub wt: SystemCurves,
    pub wind_diesel: SystemCurves,
}

impl WindDieselComparison {
    /// CSV with columns `time_h` and availability/reliability per system.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "time_h,dg_availability,dg_reliability,wt_availability,wt_reliability,wind_diesel_availability,wind_diesel_reliability\n",
        );
        for (k, t) in self.times.iter().enumerate() {
            s.push_str(&format!(
                "{t},{},{},{},{},{},{}\n",
                self.dg.availability.values[k],
                self.dg.reliability.values[k],
                self.wt.availability.values[k],
                self.wt.reliability.values[k],
                self.wind_diesel.availability.values[k],
                self.wind_diesel.reliability.values[k],
            ));
        }
        s
    }
}

pub fn wind_diesel_comparison(
    dg_rates: &DieselRates,
    wt_rates: &WindTurbineRates,
    probs: &WindTransitionProbs,
    times: &[f64],
    ctl: &StepControl,
) -> Result<WindDieselComparison> {
    let dg = build_dg_model(dg_rates);
    let wt = build_wt_model(wt_rates, probs);
    let dg = SystemCurves {
        availability: availability(&dg, times, ctl).map_err(|e| e.context("DG availability"))?,
        reliability: reliability_curve(&dg, times, ctl).map_err(|e| e.context("DG reliability"))?,
    };
    let wt = SystemCurves {
        availability: availability(&wt, times, ctl).map_err(|e| e.context("WT availability"))?,
        reliability: reliability_curve(&wt, times, ctl).map_err(|e| e.context("WT reliability"))?,
    };
    let wind_diesel = SystemCurves {
        availability: parallel_combine(&dg.availability, &wt.availability)?,
        reliability: parallel_combine(&dg.reliability, &wt.reliability)?,
    };
    Ok(WindDieselComparison {
        times: times.to_vec(),
        dg,
        wt,
        wind_diesel,
    })
}

/// Result of the minimum-output study.
#[derive(Debug, Clone, PartialEq)]
pub struct MinOutputScenario {
    pub wf_capacity_mw: f64,
    pub min_mw: f64,
    pub train_capacity_mw: f64,
    /// Fraction of one train's capacity that must be produced.
    pub train_fraction: f64,
    /// Hub-height speed replacing the cut-in speed in the wind-region terms.
    pub threshold_speed: f64,
    pub probs: WindTransitionProbs,
    pub comparison: WindDieselComparison,
}

/// The wind farm is split into two equal trains; a train counts as up only
/// while it can deliver `min_mw`. The cut-in speed in the wind-region terms is
/// raised to the speed at which a train reaches that output.
#[allow(clippy::too_many_arguments)]
pub fn min_output_scenario(
    wf_capacity_mw: f64,
    min_mw: f64,
    curve: &TurbinePowerCurve,
    weibull: &WeibullParams,
    wt_rates: &WindTurbineRates,
    dg_rates: &DieselRates,
    times: &[f64],
    ctl: &StepControl,
) -> Result<MinOutputScenario> {
    if !(wf_capacity_mw > 0.0) {
        return Err(Error::invalid("wf_capacity", "must be positive"));
    }
    if !(0.0..=wf_capacity_mw).contains(&min_mw) {
        return Err(Error::invalid("min_mw", "must lie in [0, wf_capacity]"));
    }
    let train_capacity_mw = wf_capacity_mw / 2.0;
    // A train cannot exceed its rating; demanding more means rated wind.
    let train_fraction = (min_mw / train_capacity_mw).min(1.0);
    let threshold_speed = if min_mw == 0.0 {
        curve.cut_in
    } else {
        threshold_wind_speed(curve, train_fraction)?
    };
    let probs = wind_transition_probs(weibull, &curve.with_cut_in(threshold_speed))?;
    let comparison = wind_diesel_comparison(dg_rates, wt_rates, &probs, times, ctl)?;
    Ok(MinOutputScenario {
        wf_capacity_mw,
        min_mw,
        train_capacity_mw,
        train_fraction,
        threshold_speed,
        probs,
        comparison,
    })
}
