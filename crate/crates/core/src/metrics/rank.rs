use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::summary::sorted_copy;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Percentage of `values` strictly below `v`.
pub fn percentile_rank<T: Scalar>(values: &[T], v: T) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let below = values.iter().filter(|&&x| x < v).count();
    T::from_f64_lossy(100.0 * below as f64 / values.len() as f64)
}

/// Whole-number percentile for display.
pub fn percentile_floor<T: Scalar>(rank: T) -> u32 {
    rank.floor().to_u32().unwrap_or(0)
}

/// [`percentile_rank`] of every element against the whole vector.
pub fn percentile_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let sorted = sorted_copy(values);
    let n = values.len() as f64;
    values
        .iter()
        .map(|&v| {
            let below = sorted.partition_point(|&x| x < v);
            T::from_f64_lossy(100.0 * below as f64 / n)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoncitedRow<G> {
    pub group: G,
    pub year: i32,
    pub n: usize,
    /// `None` for cells without articles.
    pub ratio: Option<f64>,
}

/// Share of uncited articles for every group and every year in `year_span`.
pub fn noncited_ratio<G: Ord + Clone>(
    ncit: &[u32],
    groups: &[G],
    years: &[i32],
    year_span: (i32, i32),
) -> Result<Vec<NoncitedRow<G>>> {
    if ncit.len() != groups.len() || ncit.len() != years.len() {
        return Err(Error::LengthMismatch {
            left: ncit.len(),
            right: groups.len().min(years.len()),
        });
    }
    let mut cells: BTreeMap<(&G, i32), (usize, usize)> = BTreeMap::new();
    for ((&c, g), &y) in ncit.iter().zip(groups).zip(years) {
        let cell = cells.entry((g, y)).or_default();
        cell.0 += 1;
        cell.1 += usize::from(c == 0);
    }
    let all_groups: BTreeSet<&G> = groups.iter().collect();
    let mut rows = Vec::new();
    for g in all_groups {
        for year in year_span.0..=year_span.1 {
            let (n, zero) = cells.get(&(g, year)).copied().unwrap_or_default();
            rows.push(NoncitedRow {
                group: g.clone(),
                year,
                n,
                ratio: (n > 0).then(|| zero as f64 / n as f64),
            });
        }
    }
    Ok(rows)
}

/// Share of articles ranked at or above `asp_min_pct` by prestige while at
/// or below `ncit_max_pct` by citation count.
pub fn discordant_share<T: Scalar>(
    asp: &[T],
    ncit: &[u32],
    asp_min_pct: f64,
    ncit_max_pct: f64,
) -> Result<f64> {
    if asp.len() != ncit.len() {
        return Err(Error::LengthMismatch {
            left: asp.len(),
            right: ncit.len(),
        });
    }
    if asp.is_empty() {
        return Err(Error::InsufficientData("no articles".into()));
    }
    let asp_pct = percentile_ranks(asp);
    let cit: Vec<f64> = ncit.iter().map(|&c| c as f64).collect();
    let cit_pct = percentile_ranks(&cit);
    let hits = asp_pct
        .iter()
        .zip(&cit_pct)
        .filter(|(&a, &c)| a.as_f64() >= asp_min_pct && c <= ncit_max_pct)
        .count();
    Ok(hits as f64 / asp.len() as f64)
}
