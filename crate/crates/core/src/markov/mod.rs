//! Continuous-time Markov chains for instantaneous availability and
//! reliability.
//!
//! Generators use the column convention: `generator[i][j]` is the transition
//! rate (1/h) into state `i` from state `j`, diagonal entries are minus the
//! total outflow, and every column sums to zero. The state probabilities
//! evolve as `dP/dt = A·P`.
//!
//! Availability is the probability mass in success states on the full
//! model. Reliability is obtained by deleting the failure rows and columns
//! and integrating the reduced system; probability leaking out of the reduced
//! system is absorbed failure and is never renormalized.

mod builders;
mod ode;
mod scenario;
mod steady;

pub use builders::{
    build_dg_model, build_single_unit_model, build_wt_model, wind_transition_probs, DieselRates,
    WindTransitionProbs, WindTurbineRates,
};
pub use ode::StepControl;
pub use scenario::{
    min_output_scenario, threshold_wind_speed, wind_diesel_comparison, MinOutputScenario,
    SystemCurves, WindDieselComparison,
};
pub use steady::steady_state;

use crate::error::{Error, Result};
use ode::{integrate_linear, LinearSystem};

/// Absolute tolerance on generator column sums.
pub const COLUMN_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    pub state_labels: Vec<String>,
    pub generator: Vec<Vec<f64>>,
    pub success_states: Vec<usize>,
    pub initial_distribution: Vec<f64>,
}

/// One offending generator entry.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorIssue {
    ColumnSum { column: usize, residual: f64 },
    NegativeRate { row: usize, column: usize, value: f64 },
    NotFinite { row: usize, column: usize },
    Shape(String),
    Initial(String),
    SuccessStates(String),
}

impl std::fmt::Display for GeneratorIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorIssue::ColumnSum { column, residual } => {
                write!(f, "column {column} sums to {residual:e}")
            }
            GeneratorIssue::NegativeRate { row, column, value } => {
                write!(f, "off-diagonal entry [{row}][{column}] = {value} is negative")
            }
            GeneratorIssue::NotFinite { row, column } => {
                write!(f, "entry [{row}][{column}] is not finite")
            }
            GeneratorIssue::Shape(s) | GeneratorIssue::Initial(s) | GeneratorIssue::SuccessStates(s) => {
                f.write_str(s)
            }
        }
    }
}

/// Validation report listing every problem found.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDiagnostics {
    pub issues: Vec<GeneratorIssue>,
    /// Column sums for every column, whether or not they are within tolerance.
    pub column_residuals: Vec<f64>,
}

impl std::fmt::Display for GeneratorDiagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks square shape, zero column sums, non-negative off-diagonals, the
/// initial distribution and the success-state set.
pub fn validate_generator(m: &MarkovModel) -> std::result::Result<(), GeneratorDiagnostics> {
    let n = m.generator.len();
    let mut issues = Vec::new();
    let mut column_residuals = vec![0.0; n];

    if n == 0 {
        issues.push(GeneratorIssue::Shape("generator is empty".into()));
    }
    if m.state_labels.len() != n {
        issues.push(GeneratorIssue::Shape(format!(
            "{} labels for {n} states",
            m.state_labels.len()
        )));
    }
    if let Some((i, r)) = m.generator.iter().enumerate().find(|(_, r)| r.len() != n) {
        issues.push(GeneratorIssue::Shape(format!("row {i} has {} entries, expected {n}", r.len())));
        return Err(GeneratorDiagnostics {
            issues,
            column_residuals,
        });
    }

    for j in 0..n {
        let mut sum = 0.0;
        for i in 0..n {
            let v = m.generator[i][j];
            if !v.is_finite() {
                issues.push(GeneratorIssue::NotFinite { row: i, column: j });
                continue;
            }
            if i != j && v < 0.0 {
                issues.push(GeneratorIssue::NegativeRate {
                    row: i,
                    column: j,
                    value: v,
                });
            }
            sum += v;
        }
        column_residuals[j] = sum;
        if !(sum.abs() <= COLUMN_SUM_TOL) {
            issues.push(GeneratorIssue::ColumnSum {
                column: j,
                residual: sum,
            });
        }
    }

    if m.initial_distribution.len() != n {
        issues.push(GeneratorIssue::Initial(format!(
            "initial distribution has {} entries, expected {n}",
            m.initial_distribution.len()
        )));
    } else {
        let total: f64 = m.initial_distribution.iter().sum();
        if (total - 1.0).abs() > 1e-12 || m.initial_distribution.iter().any(|&p| !(p >= 0.0)) {
            issues.push(GeneratorIssue::Initial(format!(
                "initial distribution must be a probability vector (sum = {total})"
            )));
        }
    }

    if m.success_states.is_empty() {
        issues.push(GeneratorIssue::SuccessStates("success set is empty".into()));
    }
    if let Some(&s) = m.success_states.iter().find(|&&s| s >= n) {
        issues.push(GeneratorIssue::SuccessStates(format!("success state {s} out of range")));
    }

    if issues.is_empty() {
        Ok(())
    } else {
        Err(GeneratorDiagnostics {
            issues,
            column_residuals,
        })
    }
}

impl MarkovModel {
    pub fn n_states(&self) -> usize {
        self.generator.len()
    }

    pub fn validate(&self) -> Result<()> {
        validate_generator(self).map_err(|d| Error::InvalidGenerator(d.to_string()))
    }

    pub fn failure_states(&self) -> Vec<usize> {
        (0..self.n_states())
            .filter(|i| !self.success_states.contains(i))
            .collect()
    }

    /// Sub-generator over the success states only (failure rows and columns
    /// deleted). Column sums of the result are ≤ 0.
    pub fn reduced_generator(&self) -> Vec<Vec<f64>> {
        let keep = self.sorted_success();
        keep.iter()
            .map(|&i| keep.iter().map(|&j| self.generator[i][j]).collect())
            .collect()
    }

    fn sorted_success(&self) -> Vec<usize> {
        let mut keep = self.success_states.clone();
        keep.sort_unstable();
        keep.dedup();
        keep
    }

    /// Generator as CSV with a header of state labels and one labelled row
    /// per target state.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("to\\from");
        for l in &self.state_labels {
            s.push(',');
            s.push_str(&csv_field(l));
        }
        s.push('\n');
        for (label, row) in self.state_labels.iter().zip(&self.generator) {
            s.push_str(&csv_field(label));
            for v in row {
                s.push(',');
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// State probabilities on a time grid. `states[k]` is the original model
/// index of component `k` (all states for a full model, the success states
/// for a reduced one).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<usize>,
    pub distributions: Vec<Vec<f64>>,
}

/// Values on a time grid (availability or reliability).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// `n + 1` equally spaced times from 0 to `t_end`.
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("times", "time grid is empty"));
    }
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::invalid("times", "times must be finite and non-negative"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("times", "times must be non-decreasing"));
    }
    if times.last().is_some_and(|&t| t <= 0.0) {
        return Err(Error::invalid("t_end", "must be positive"));
    }
    Ok(())
}

/// Solves `dP/dt = A·P` from the initial distribution and reports the
/// distribution at every requested time.
pub fn integrate(m: &MarkovModel, times: &[f64], ctl: &StepControl) -> Result<Trajectory> {
    m.validate()?;
    check_times(times)?;
    let sys = LinearSystem { a: &m.generator };
    let distributions = integrate_linear(&sys, &m.initial_distribution, times, ctl)?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: (0..m.n_states()).collect(),
        distributions,
    })
}

/// Pointwise sum of success-state probabilities.
pub fn availability_curve(traj: &Trajectory, success_states: &[usize]) -> Result<TimeSeries> {
    if success_states.is_empty() {
        return Err(Error::invalid("success_states", "success set is empty"));
    }
    let cols: Vec<usize> = traj
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| success_states.contains(s))
        .map(|(k, _)| k)
        .collect();
    let values = traj
        .distributions
        .iter()
        .map(|p| cols.iter().map(|&k| p[k]).sum())
        .collect();
    Ok(TimeSeries {
        times: traj.times.clone(),
        values,
    })
}

/// Absolute tolerance cap for reliability integration. Survival mass decays
/// toward zero, and an explicit step sized by a larger floor leaves noise of
/// that size once the mass falls below it.
pub const RELIABILITY_ATOL: f64 = 1e-30;

/// Probability of having stayed in success states continuously since t = 0.
pub fn reliability_curve(m: &MarkovModel, times: &[f64], ctl: &StepControl) -> Result<TimeSeries> {
    m.validate()?;
    check_times(times)?;
    let ctl = &StepControl {
        atol: ctl.atol.min(RELIABILITY_ATOL),
        ..*ctl
    };
    let keep = m.sorted_success();
    let reduced = m.reduced_generator();
    let y0: Vec<f64> = keep.iter().map(|&i| m.initial_distribution[i]).collect();
    let sys = LinearSystem { a: &reduced };
    let dists = integrate_linear(&sys, &y0, times, ctl)?;
    Ok(TimeSeries {
        times: times.to_vec(),
        values: dists.iter().map(|p| p.iter().sum()).collect(),
    })
}

/// Availability series of a full model.
pub fn availability(m: &MarkovModel, times: &[f64], ctl: &StepControl) -> Result<TimeSeries> {
    let traj = integrate(m, times, ctl)?;
    availability_curve(&traj, &m.success_states)
}

/// Two independent systems in parallel: `1 − (1 − R_A)(1 − R_B)`.
pub fn parallel_combine(a: &TimeSeries, b: &TimeSeries) -> Result<TimeSeries> {
    if a.times != b.times || a.values.len() != b.values.len() {
        return Err(Error::invalid("time grid", "series are on different time grids"));
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&ra, &rb)| {
            // Same value as the product form, but never below either input.
            let (hi, lo) = (ra.max(rb).clamp(0.0, 1.0), ra.min(rb).clamp(0.0, 1.0));
            hi + lo * (1.0 - hi)
        })
        .collect();
    Ok(TimeSeries {
        times: a.times.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_state(lambda: f64, mu: f64) -> MarkovModel {
        build_single_unit_model(lambda, mu)
    }

    #[test]
    fn negated_entry_is_named() {
        let mut m = build_dg_model(&DieselRates::TABLE_DEFAULT);
        m.generator[1][0] = -m.generator[1][0];
        let d = validate_generator(&m).unwrap_err();
        assert!(d.issues.contains(&GeneratorIssue::NegativeRate {
            row: 1,
            column: 0,
            value: -5.2e-3
        }));
        assert!(d.issues.iter().any(|i| matches!(i, GeneratorIssue::ColumnSum { column: 0, .. })));
        assert!(matches!(m.validate(), Err(Error::InvalidGenerator(_))));
    }

    #[test]
    fn no_failures_means_certain_success() {
        let m = build_dg_model(&DieselRates {
            failure_rate: 0.0,
            repair_rate: 0.05,
            common_cause_rate: 0.0,
        });
        let times = uniform_grid(1000.0, 50);
        let traj = integrate(&m, &times, &StepControl::default()).unwrap();
        for p in &traj.distributions {
            assert_eq!(p[0], 1.0);
        }
        let r = reliability_curve(&m, &times, &StepControl::default()).unwrap();
        assert!(r.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn two_state_closed_form() {
        let (l, mu) = (5.2e-3, 0.05);
        let m = two_state(l, mu);
        let times = uniform_grid(1000.0, 200);
        let ctl = StepControl::default();
        let a = availability(&m, &times, &ctl).unwrap();
        let r = reliability_curve(&m, &times, &ctl).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let exact = mu / (l + mu) + l / (l + mu) * (-(l + mu) * t).exp();
            assert!((a.values[k] - exact).abs() < 1e-6);
            assert!((r.values[k] - (-l * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn availability_complement_and_all_success() {
        let m = build_dg_model(&DieselRates::TABLE_DEFAULT);
        let times = uniform_grid(500.0, 25);
        let traj = integrate(&m, &times, &StepControl::default()).unwrap();
        let a = availability_curve(&traj, &m.success_states).unwrap();
        let q = availability_curve(&traj, &[3]).unwrap();
        for (x, y) in a.values.iter().zip(&q.values) {
            assert!((x + y - 1.0).abs() < 1e-12);
        }
        let all = availability_curve(&traj, &[0, 1, 2, 3]).unwrap();
        assert!(all.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(availability_curve(&traj, &[]).is_err());
    }

    #[test]
    fn parallel_examples() {
        let t = vec![0.0, 1.0];
        let one = TimeSeries { times: t.clone(), values: vec![1.0, 1.0] };
        let any = TimeSeries { times: t.clone(), values: vec![0.3, 0.7] };
        assert_eq!(parallel_combine(&one, &any).unwrap().values, vec![1.0, 1.0]);
        let nine = TimeSeries { times: t.clone(), values: vec![0.9, 0.9] };
        let p = parallel_combine(&nine, &nine).unwrap();
        assert!(p.values.iter().all(|v| (v - 0.99).abs() < 1e-15));
        let other = TimeSeries { times: vec![0.0, 2.0], values: vec![0.9, 0.9] };
        assert!(parallel_combine(&nine, &other).is_err());
    }

    #[test]
    fn csv_dump_has_labels() {
        let m = two_state(0.1, 0.2);
        let csv = m.to_csv();
        assert!(csv.starts_with("to\\from,up,down\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    /// Random irreducible generators on 2..=5 states with a random failure
    /// subset.
    fn random_model() -> impl Strategy<Value = MarkovModel> {
        (2usize..=5)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0.0f64..0.5, n * n),
                    1usize..n,
                )
            })
            .prop_map(|(n, rates, n_success)| {
                let mut g = vec![vec![0.0; n]; n];
                for j in 0..n {
                    for i in 0..n {
                        if i != j {
                            g[i][j] = rates[i * n + j];
                        }
                    }
                    // ring edge keeps the chain irreducible
                    g[(j + 1) % n][j] += 0.01;
                    g[j][j] = -(0..n).filter(|&i| i != j).map(|i| g[i][j]).sum::<f64>();
                }
                let mut init = vec![0.0; n];
                init[0] = 1.0;
                MarkovModel {
                    state_labels: (0..n).map(|i| format!("S{i}")).collect(),
                    generator: g,
                    success_states: (0..n_success).collect(),
                    initial_distribution: init,
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn reliability_bounded_by_availability(m in random_model()) {
            let times = uniform_grid(50.0, 50);
            let ctl = StepControl::default();
            let a = availability(&m, &times, &ctl).unwrap();
            let r = reliability_curve(&m, &times, &ctl).unwrap();
            for k in 0..times.len() {
                prop_assert!(r.values[k] <= a.values[k] + 1e-9);
            }
            for w in r.values.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-10);
            }
        }

        #[test]
        fn long_run_matches_steady_state(m in random_model()) {
            let pi = steady_state(&m).unwrap();
            // slowest mode of these chains decays at least as fast as e^{-0.01 t}
            let traj = integrate(&m, &[3000.0], &StepControl::default()).unwrap();
            for (p, q) in traj.distributions[0].iter().zip(&pi) {
                prop_assert!((p - q).abs() < 1e-6);
            }
        }

        #[test]
        fn parallel_dominates(a in proptest::collection::vec(0.0f64..=1.0, 10),
                              b in proptest::collection::vec(0.0f64..=1.0, 10)) {
            let t: Vec<f64> = (0..10).map(f64::from).collect();
            let sa = TimeSeries { times: t.clone(), values: a };
            let sb = TimeSeries { times: t, values: b };
            let p = parallel_combine(&sa, &sb).unwrap();
            for k in 0..10 {
                let (ra, rb) = (sa.values[k], sb.values[k]);
                prop_assert!(p.values[k] >= ra.max(rb));
                prop_assert!((p.values[k] - (ra + rb - ra * rb)).abs() <= 1e-15);
            }
        }
    }
}
