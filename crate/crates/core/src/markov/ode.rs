//! Adaptive Dormand–Prince 5(4) integration of the linear system `dP/dt = A·P`.
//!
//! Steps are truncated so that every requested output time is hit exactly,
//! which avoids interpolation error on the output grid.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step (h) accepted before reporting stiffness.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            min_step: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

// Stage nodes are omitted: the system is autonomous.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Dense column-convention rate matrix, `a[i][j]` = rate into `i` from `j`.
pub(crate) struct LinearSystem<'a> {
    pub a: &'a [Vec<f64>],
}

impl LinearSystem<'_> {
    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.a) {
            *o = row.iter().zip(y).map(|(a, p)| a * p).sum();
        }
    }

    fn max_diagonal(&self) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates from `t = 0` and returns the state at each time in `times`
/// (non-decreasing, non-negative).
pub(crate) fn integrate_linear(
    sys: &LinearSystem<'_>,
    y0: &[f64],
    times: &[f64],
    ctl: &StepControl,
) -> Result<Vec<Vec<f64>>> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0f64;
    let mut out = Vec::with_capacity(times.len());

    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    sys.rhs(&y, &mut k[0]);

    let scale0 = sys.max_diagonal().max(1e-12);
    let mut h = (0.01 / scale0).min(1.0);
    let mut steps = 0usize;

    for &target in times {
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };

            stage(&y, &k, step, &[A21], &mut tmp);
            sys.rhs(&tmp, &mut k[1]);
            stage(&y, &k, step, &[A31, A32], &mut tmp);
            sys.rhs(&tmp, &mut k[2]);
            stage(&y, &k, step, &[A41, A42, A43], &mut tmp);
            sys.rhs(&tmp, &mut k[3]);
            stage(&y, &k, step, &[A51, A52, A53, A54], &mut tmp);
            sys.rhs(&tmp, &mut k[4]);
            stage(&y, &k, step, &[A61, A62, A63, A64, A65], &mut tmp);
            sys.rhs(&tmp, &mut k[5]);
            stage(&y, &k, step, &[A71, 0.0, A73, A74, A75, A76], &mut y_new);
            sys.rhs(&y_new, &mut k[6]);

            let mut err = 0.0;
            for i in 0..n {
                let e = step
                    * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i]
                        + E6 * k[5][i]
                        + E7 * k[6][i]);
                let sc = ctl.atol + ctl.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();

            steps += 1;
            if steps > ctl.max_steps {
                return Err(Error::Stiffness {
                    time: t,
                    max_diagonal: sys.max_diagonal(),
                });
            }

            if err <= 1.0 {
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // Keep the unconstrained step size when the step was cut short
                // to land on an output time.
                h = if last { h.max(step * grow) } else { step * grow };
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                if h < ctl.min_step {
                    return Err(Error::Stiffness {
                        time: t,
                        max_diagonal: sys.max_diagonal(),
                    });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn stage(y: &[f64], k: &[Vec<f64>], h: f64, coeffs: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (kj, c) in k.iter().zip(coeffs) {
            acc += c * kj[i];
        }
        *o = y[i] + h * acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let a = vec![vec![-0.5]];
        let sys = LinearSystem { a: &a };
        let times: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let ys = integrate_linear(&sys, &[1.0], &times, &StepControl::default()).unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0] - (-0.5 * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn hits_output_times_exactly_including_zero() {
        let a = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let sys = LinearSystem { a: &a };
        let ys = integrate_linear(&sys, &[1.0, 0.0], &[0.0, 0.0, 0.5], &StepControl::default())
            .unwrap();
        assert_eq!(ys[0], vec![1.0, 0.0]);
        assert_eq!(ys[1], vec![1.0, 0.0]);
        assert!((ys[2][0] - (-0.5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn step_underflow_reports_stiffness() {
        let a = vec![vec![-1e9]];
        let sys = LinearSystem { a: &a };
        let ctl = StepControl {
            min_step: 1e-3,
            ..StepControl::default()
        };
        let err = integrate_linear(&sys, &[1.0], &[1.0], &ctl).unwrap_err();
        match err {
            Error::Stiffness { max_diagonal, .. } => assert_eq!(max_diagonal, 1e9),
            e => panic!("{e}"),
        }
    }
}
