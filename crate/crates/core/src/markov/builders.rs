//! Built-in Markov models: a single repairable unit, two identical diesel
//! generators with common-cause failure, and two identical wind turbines
//! whose transitions also depend on the wind-speed region.

use serde::{Deserialize, Serialize};

use super::MarkovModel;
use crate::error::Result;
use crate::wind::{TurbinePowerCurve, WeibullParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DieselRates {
    /// λ, 1/h
    pub failure_rate: f64,
    /// μ, 1/h
    pub repair_rate: f64,
    /// λ_ccf, 1/h
    pub common_cause_rate: f64,
}

impl DieselRates {
    /// Emergency diesel generator data used for nuclear plant studies.
    pub const TABLE_DEFAULT: DieselRates = DieselRates {
        failure_rate: 5.2e-3,
        repair_rate: 0.05,
        common_cause_rate: 2.59e-4,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindTurbineRates {
    pub failure_rate: f64,
    pub repair_rate: f64,
}

impl WindTurbineRates {
    pub const TABLE_DEFAULT: WindTurbineRates = WindTurbineRates {
        failure_rate: 0.00073266,
        repair_rate: 0.016423,
    };
}

/// Wind-region transition terms ∅_ij. Each is a Weibull region probability
/// that the generator uses directly as a rate (1/h).
///
/// Aliases: ∅_06 = ∅_16 = ∅_26, ∅_60 = ∅_61 = ∅_62, ∅_30 = ∅_41 = ∅_52,
/// ∅_03 = ∅_14 = ∅_25, ∅_63 = ∅_64 = ∅_65, ∅_36 = ∅_46 = ∅_56.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindTransitionProbs {
    /// ∅_06: P(V < V_i)
    pub below_cut_in: f64,
    /// ∅_60: P(V > V_i)
    pub above_cut_in: f64,
    /// ∅_30: P(V < V_r)
    pub below_rated: f64,
    /// ∅_03: P(V > V_r)
    pub above_rated: f64,
    /// ∅_63: P(V < V_o)
    pub below_cut_out: f64,
    /// ∅_36: P(V > V_o)
    pub above_cut_out: f64,
}

impl WindTransitionProbs {
    /// ∅ for the transition `from → to` of the seven-state model, if defined.
    pub fn phi(&self, from: usize, to: usize) -> Option<f64> {
        Some(match (from, to) {
            (0 | 1 | 2, 6) => self.below_cut_in,
            (6, 0 | 1 | 2) => self.above_cut_in,
            (3, 0) | (4, 1) | (5, 2) => self.below_rated,
            (0, 3) | (1, 4) | (2, 5) => self.above_rated,
            (6, 3 | 4 | 5) => self.below_cut_out,
            (3 | 4 | 5, 6) => self.above_cut_out,
            _ => return None,
        })
    }
}

/// Closed-form ∅ values from the site Weibull distribution and the turbine's
/// characteristic speeds.
pub fn wind_transition_probs(w: &WeibullParams, curve: &TurbinePowerCurve) -> Result<WindTransitionProbs> {
    w.validate()?;
    Ok(WindTransitionProbs {
        below_cut_in: w.cdf(curve.cut_in),
        above_cut_in: w.exceedance(curve.cut_in),
        below_rated: w.cdf(curve.rated_speed),
        above_rated: w.exceedance(curve.rated_speed),
        below_cut_out: w.cdf(curve.cut_out),
        above_cut_out: w.exceedance(curve.cut_out),
    })
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn first_state(n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    p
}

/// Two-state repairable unit: up → down at λ, down → up at μ.
pub fn build_single_unit_model(failure_rate: f64, repair_rate: f64) -> MarkovModel {
    MarkovModel {
        state_labels: labels(&["up", "down"]),
        generator: vec![
            vec![-failure_rate, repair_rate],
            vec![failure_rate, -repair_rate],
        ],
        success_states: vec![0],
        initial_distribution: first_state(2),
    }
}

/// Two identical diesel generators, one-out-of-two success, with a
/// common-cause path from both-up straight to both-down.
pub fn build_dg_model(rates: &DieselRates) -> MarkovModel {
    let DieselRates {
        failure_rate: l,
        repair_rate: mu,
        common_cause_rate: ccf,
    } = *rates;
    MarkovModel {
        state_labels: labels(&["S0 both up", "S1 DG1 down", "S2 DG2 down", "S3 both down"]),
        generator: vec![
            vec![-(2.0 * l + ccf), mu, mu, 0.0],
            vec![l, -(l + mu), 0.0, mu],
            vec![l, 0.0, -(l + mu), mu],
            vec![ccf, l, l, -2.0 * mu],
        ],
        success_states: vec![0, 1, 2],
        initial_distribution: first_state(4),
    }
}

/// Two identical wind turbines in parallel. States S0–S5 combine turbine
/// health with the wind region; S6 is the failed state.
pub fn build_wt_model(rates: &WindTurbineRates, p: &WindTransitionProbs) -> MarkovModel {
    let (l, mu) = (rates.failure_rate, rates.repair_rate);
    let f06 = p.below_cut_in;
    let f60 = p.above_cut_in;
    let f30 = p.below_rated;
    let f03 = p.above_rated;
    let f63 = p.below_cut_out;
    let f36 = p.above_cut_out;

    let a = -(f03 + 2.0 * l + f06);
    let b = -(l + mu + f06 + f03);
    let c = -(l + mu + f06 + f03);
    let d = -(f30 + 2.0 * l + f36);
    let e = -(mu + l + f36 + f30);
    let f = -(mu + l + f30 + f36);
    let g = -(f60 + 4.0 * mu + f60 + f60 + f63 + f63 + f63);

    MarkovModel {
        state_labels: labels(&[
            "S0 two healthy, Vi<V<Vr",
            "S1 one healthy, Vi<V<Vr",
            "S2 one healthy, Vi<V<Vr",
            "S3 two healthy, Vr<V<Vo",
            "S4 one healthy, Vr<V<Vo",
            "S5 one healthy, Vr<V<Vo",
            "S6 failed or no wind",
        ]),
        generator: vec![
            vec![a, mu, mu, f30, 0.0, 0.0, f60],
            vec![l, b, 0.0, 0.0, f30, 0.0, mu + f60],
            vec![l, 0.0, c, 0.0, 0.0, f30, mu + f60],
            vec![f03, 0.0, 0.0, d, mu, mu, f63],
            vec![0.0, f03, 0.0, l, e, 0.0, mu + f63],
            vec![0.0, 0.0, f03, l, 0.0, f, mu + f63],
            vec![f06, l + f06, l + f06, f36, l + f36, l + f36, g],
        ],
        success_states: vec![0, 1, 2, 3, 4, 5],
        initial_distribution: first_state(7),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{validate_generator, COLUMN_SUM_TOL};

    fn table_probs() -> WindTransitionProbs {
        let w = WeibullParams::new(11.05, 5.64).unwrap();
        let c = TurbinePowerCurve::new(3.0, 12.0, 25.0, 2.0, 80.0).unwrap();
        wind_transition_probs(&w, &c).unwrap()
    }

    #[test]
    fn dg_model_layout() {
        let m = build_dg_model(&DieselRates::TABLE_DEFAULT);
        assert_eq!(m.generator[3][0], 2.59e-4);
        validate_generator(&m).unwrap();
        let m = build_dg_model(&DieselRates {
            common_cause_rate: 0.0,
            ..DieselRates::TABLE_DEFAULT
        });
        assert_eq!(m.generator[3][0], 0.0);
        validate_generator(&m).unwrap();
    }

    #[test]
    fn transition_probs_table_values() {
        let p = table_probs();
        assert!((p.below_cut_in - 9.35e-4).abs() < 1e-5);
        assert_eq!(p.below_cut_in + p.above_cut_in, 1.0);
        assert!((p.below_rated + p.above_rated - 1.0).abs() < 1e-15);
        assert!((p.below_cut_out + p.above_cut_out - 1.0).abs() < 1e-15);

        let w = WeibullParams::new(11.05, 5.64).unwrap();
        let c = TurbinePowerCurve::new(1e-9, 12.0, 25.0, 2.0, 80.0).unwrap();
        assert!(wind_transition_probs(&w, &c).unwrap().below_cut_in < 1e-60);
    }

    #[test]
    fn wt_model_layout() {
        let p = table_probs();
        let m = build_wt_model(&WindTurbineRates::TABLE_DEFAULT, &p);
        assert_eq!(m.generator[6][0], p.phi(0, 6).unwrap());
        assert_eq!(m.generator[0][6], p.phi(6, 0).unwrap());
        let mu = WindTurbineRates::TABLE_DEFAULT.repair_rate;
        let g = -(p.phi(6, 0).unwrap()
            + 4.0 * mu
            + p.phi(6, 1).unwrap()
            + p.phi(6, 2).unwrap()
            + p.phi(6, 3).unwrap()
            + p.phi(6, 4).unwrap()
            + p.phi(6, 5).unwrap());
        assert_eq!(m.generator[6][6], g);
        validate_generator(&m).unwrap();
        for j in 0..7 {
            let s: f64 = (0..7).map(|i| m.generator[i][j]).sum();
            assert!(s.abs() < COLUMN_SUM_TOL);
        }
    }

    #[test]
    fn reduced_wt_system_is_upper_left_block() {
        let p = table_probs();
        let m = build_wt_model(&WindTurbineRates::TABLE_DEFAULT, &p);
        let r = m.reduced_generator();
        assert_eq!(r.len(), 6);
        for i in 0..6 {
            assert_eq!(r[i], m.generator[i][..6].to_vec());
        }
    }

    #[test]
    fn diagonals_follow_outflow_formulas() {
        let p = table_probs();
        let WindTurbineRates {
            failure_rate: l,
            repair_rate: mu,
        } = WindTurbineRates::TABLE_DEFAULT;
        let m = build_wt_model(&WindTurbineRates::TABLE_DEFAULT, &p);
        let phi = |i, j| p.phi(i, j).unwrap();
        assert_eq!(m.generator[0][0], -(phi(0, 3) + 2.0 * l + phi(0, 6)));
        assert_eq!(m.generator[1][1], -(l + mu + phi(1, 6) + phi(1, 4)));
        assert_eq!(m.generator[2][2], -(l + mu + phi(2, 6) + phi(2, 5)));
        assert_eq!(m.generator[3][3], -(phi(3, 0) + 2.0 * l + phi(3, 6)));
        assert_eq!(m.generator[4][4], -(mu + l + phi(4, 6) + phi(4, 1)));
        assert_eq!(m.generator[5][5], -(mu + l + phi(5, 2) + phi(5, 6)));
    }
}
