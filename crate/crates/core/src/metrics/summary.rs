use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStats<T> {
    pub min: T,
    pub q1: T,
    pub median: T,
    pub mean: T,
    pub q3: T,
    pub max: T,
}

/// Quantile of ascending `sorted` data by linear interpolation between
/// order statistics: position `(n - 1) * p`.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], p: f64) -> T {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = T::from_f64_lossy(h - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub(crate) fn sorted_copy<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in statistics input"));
    v
}

pub(crate) fn mean<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().sum::<T>() / T::from_usize_lossy(values.len())
}

pub(crate) fn median_sorted<T: Scalar>(sorted: &[T]) -> T {
    quantile_sorted(sorted, 0.5)
}

pub fn summary_stats<T: Scalar>(values: &[T]) -> Result<SummaryStats<T>> {
    if values.is_empty() {
        return Err(Error::InsufficientData("summary of empty input".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("summary input contains NaN"));
    }
    let sorted = sorted_copy(values);
    Ok(SummaryStats {
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        // Clamp guards the ordering invariant against summation rounding.
        mean: mean(&sorted).max(sorted[0]).min(sorted[sorted.len() - 1]),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}
