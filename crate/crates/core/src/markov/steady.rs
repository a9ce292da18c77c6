use nalgebra::{DMatrix, DVector};

use super::MarkovModel;
use crate::error::{Error, Result};

/// Stationary distribution π with `A·π = 0` and `Σπ = 1`.
///
/// The null space of the generator has one dimension per recurrent class, so
/// a nullity above one means the stationary distribution depends on the
/// starting state and is rejected.
pub fn steady_state(m: &MarkovModel) -> Result<Vec<f64>> {
    m.validate()?;
    let n = m.n_states();
    let a = DMatrix::from_fn(n, n, |i, j| m.generator[i][j]);

    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.max().max(f64::MIN_POSITIVE);
    let nullity = sv.iter().filter(|&&s| s <= 1e-10 * smax).count();
    if nullity > 1 {
        return Err(Error::MultipleRecurrentClasses { classes: nullity });
    }

    // Rows of a generator sum to the zero vector, so any one row is redundant
    // and can be replaced by the normalization constraint.
    let mut sys = a;
    for j in 0..n {
        sys[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let pi = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidGenerator("singular stationary system".into()))?;
    Ok(pi.iter().map(|&p| if p.abs() < 1e-300 { 0.0 } else { p }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{build_single_unit_model, MarkovModel};

    #[test]
    fn two_state_closed_form() {
        let (l, mu) = (5.2e-3, 0.05);
        let pi = steady_state(&build_single_unit_model(l, mu)).unwrap();
        assert!((pi[0] - mu / (l + mu)).abs() < 1e-14);
        assert!((pi[1] - l / (l + mu)).abs() < 1e-14);
        assert!((pi[0] - 0.9058).abs() < 1e-4);
    }

    #[test]
    fn symmetric_ring() {
        let g = vec![
            vec![-2.0, 1.0, 1.0],
            vec![1.0, -2.0, 1.0],
            vec![1.0, 1.0, -2.0],
        ];
        let m = MarkovModel {
            state_labels: vec!["a".into(), "b".into(), "c".into()],
            generator: g,
            success_states: vec![0],
            initial_distribution: vec![1.0, 0.0, 0.0],
        };
        for p in steady_state(&m).unwrap() {
            assert!((p - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_absorbing_states_rejected() {
        let m = MarkovModel {
            state_labels: vec!["a".into(), "b".into(), "c".into()],
            generator: vec![
                vec![-1.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0],
                vec![0.5, 0.0, 0.0],
            ],
            success_states: vec![0],
            initial_distribution: vec![1.0, 0.0, 0.0],
        };
        assert_eq!(
            steady_state(&m),
            Err(Error::MultipleRecurrentClasses { classes: 2 })
        );
    }
}
