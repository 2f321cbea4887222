use std::collections::BTreeMap;

use serde::Serialize;

use super::summary::{quantile_sorted, sorted_copy};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimum number of samples at or above the threshold.
pub const MIN_TAIL_SAMPLES: usize = 20;

/// Pareto tail fit `p(x) = alpha * x_min^alpha / x^(1 + alpha)` for `x >= x_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIndexEstimate<T> {
    pub alpha: T,
    pub x_min: T,
    pub n_tail: usize,
}

/// Hill estimate with the threshold at the `tail_quantile` empirical
/// quantile (0.90 keeps the top decile).
pub fn tail_index<T: Scalar>(values: &[T], tail_quantile: f64) -> Result<TailIndexEstimate<T>> {
    if values.is_empty() {
        return Err(Error::InsufficientData("tail index of empty input".into()));
    }
    if !(0.0..1.0).contains(&tail_quantile) {
        return Err(Error::invalid(format!(
            "tail quantile {tail_quantile} outside [0, 1)"
        )));
    }
    let sorted = sorted_copy(values);
    let x_min = quantile_sorted(&sorted, tail_quantile);
    tail_index_above(values, x_min)
}

/// Conditional maximum-likelihood (Hill) estimate for a fixed threshold:
/// `alpha = n_tail / sum(ln(x / x_min))` over `x >= x_min`.
///
/// Samples equal to `x_min` count towards `n_tail` and add nothing to the
/// log-sum.
pub fn tail_index_above<T: Scalar>(values: &[T], x_min: T) -> Result<TailIndexEstimate<T>> {
    if !(x_min > T::zero()) {
        return Err(Error::invalid(format!(
            "tail threshold must be positive, got {x_min}"
        )));
    }
    let mut n_tail = 0usize;
    let mut log_sum = T::zero();
    for &x in values.iter().filter(|&&x| x >= x_min) {
        n_tail += 1;
        log_sum = log_sum + (x / x_min).ln();
    }
    if n_tail < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{n_tail} samples at or above {x_min}, need {MIN_TAIL_SAMPLES}"
        )));
    }
    if !(log_sum > T::zero()) {
        return Err(Error::InsufficientData(
            "all tail samples equal the threshold".into(),
        ));
    }
    Ok(TailIndexEstimate {
        alpha: T::from_usize_lossy(n_tail) / log_sum,
        x_min,
        n_tail,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailSeriesRow<G, T> {
    pub group: G,
    pub year: i32,
    pub n: usize,
    /// `None` when the cell has too few positive tail samples.
    pub estimate: Option<TailIndexEstimate<T>>,
}

/// Tail index per `(group, year)` cell.
pub fn tail_index_series<G: Ord + Clone, T: Scalar>(
    values: &[T],
    groups: &[G],
    years: &[i32],
    tail_quantile: f64,
) -> Result<Vec<TailSeriesRow<G, T>>> {
    if values.len() != groups.len() || values.len() != years.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: groups.len().min(years.len()),
        });
    }
    let mut cells: BTreeMap<(G, i32), Vec<T>> = BTreeMap::new();
    for ((v, g), &y) in values.iter().zip(groups).zip(years) {
        cells.entry((g.clone(), y)).or_default().push(*v);
    }
    Ok(cells
        .into_iter()
        .map(|((group, year), vals)| TailSeriesRow {
            group,
            year,
            n: vals.len(),
            estimate: tail_index(&vals, tail_quantile).ok(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pareto(n: usize, alpha: f64, x_min: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| x_min * (1.0 - rng.gen::<f64>()).powf(-1.0 / alpha))
            .collect()
    }

    /// Pareto log-likelihood in alpha for fixed x_min.
    fn log_lik(tail: &[f64], x_min: f64, alpha: f64) -> f64 {
        tail.iter()
            .map(|&x| alpha.ln() + alpha * x_min.ln() - (1.0 + alpha) * x.ln())
            .sum()
    }

    fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-11 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        (a + b) / 2.0
    }

    #[test]
    fn agrees_with_numeric_mle() {
        let xs = pareto(1_000, 1.88, 1.0, 11);
        let est = tail_index_above(&xs, 1.0).unwrap();
        let mle = golden_max(|a| log_lik(&xs, 1.0, a), 0.1, 10.0);
        assert!((est.alpha - mle).abs() < 1e-6, "{} vs {mle}", est.alpha);
    }

    #[test]
    fn degenerate_tail() {
        let c = 5.0f64;
        let mut xs = vec![c; 40];
        xs.extend([0.5, 0.7]);
        let est = tail_index_above(&xs, 1.0).unwrap();
        assert_eq!(est.n_tail, 40);
        assert!((est.alpha - 1.0 / c.ln()).abs() < 1e-12);
    }

    #[test]
    fn recovers_alpha_with_top_decile() {
        let xs = pareto(200_000, 2.5, 3.0, 5);
        let est = tail_index(&xs, 0.9).unwrap();
        assert_eq!(est.n_tail, 20_000);
        assert!((est.alpha - 2.5).abs() < 0.1, "{}", est.alpha);
    }

    #[test]
    fn errors() {
        assert!(tail_index_above(&[2.0f64; 10], 1.0).is_err());
        assert!(tail_index_above(&[1.0f64; 30], 1.0).is_err());
        assert!(tail_index(&[-1.0f64; 30], 0.9).is_err());
        assert!(tail_index::<f64>(&[], 0.9).is_err());
    }

    #[test]
    fn series_by_cell() {
        let xs = pareto(600, 2.0, 1.0, 2);
        let groups: Vec<&str> = (0..600).map(|i| if i % 2 == 0 { "a" } else { "b" }).collect();
        let years: Vec<i32> = (0..600).map(|i| 2000 + (i % 3) as i32).collect();
        let rows = tail_index_series(&xs, &groups, &years, 0.0).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.n == 100 && r.estimate.is_some()));
    }

    proptest! {
        #[test]
        fn scale_equivariant(seed in 0u64..1000, c in 0.01f64..100.0) {
            let xs = pareto(500, 1.5, 1.0, seed);
            let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
            let a = tail_index(&xs, 0.9).unwrap();
            let b = tail_index(&scaled, 0.9).unwrap();
            prop_assert!((a.alpha - b.alpha).abs() < 1e-9 * a.alpha);
            prop_assert!((b.x_min - c * a.x_min).abs() < 1e-9 * b.x_min);
        }
    }
}
