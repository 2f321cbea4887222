use std::collections::BTreeMap;

use serde::Serialize;

use super::summary::{median_sorted, sorted_copy};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const N_DECILES: usize = 10;

/// Product-moment correlation, computed in two passes.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two observations"));
    }
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// Splits `members` (indices into `ncit`) into ten bins by citation count,
/// most cited first. Ties keep index order. Bin sizes differ by at most one
/// and the leftover goes to the leading bins.
pub fn decile_bins(ncit: &[u32], members: &[usize]) -> Vec<Vec<usize>> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| ncit[b].cmp(&ncit[a]).then(a.cmp(&b)));
    let base = order.len() / N_DECILES;
    let extra = order.len() % N_DECILES;
    let mut bins = Vec::with_capacity(N_DECILES);
    let mut start = 0;
    for k in 0..N_DECILES {
        let size = base + usize::from(k < extra);
        bins.push(order[start..start + size].to_vec());
        start += size;
    }
    bins
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileRow<G, T> {
    pub group: G,
    /// 1 holds the most cited tenth.
    pub decile: usize,
    pub n: usize,
    /// `None` when the bin is too small or has no variance.
    pub r: Option<T>,
}

/// Prestige versus citation-count correlation within citation deciles of
/// each group, after dropping uncited articles.
pub fn decile_correlations<G: Ord + Clone, T: Scalar>(
    asp: &[T],
    ncit: &[u32],
    groups: &[G],
) -> Result<Vec<DecileRow<G, T>>> {
    if asp.len() != ncit.len() || asp.len() != groups.len() {
        return Err(Error::LengthMismatch {
            left: asp.len(),
            right: ncit.len().min(groups.len()),
        });
    }
    let mut members: BTreeMap<&G, Vec<usize>> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        if ncit[i] > 0 {
            members.entry(g).or_default().push(i);
        }
    }
    let mut rows = Vec::new();
    for (group, idx) in members {
        for (k, bin) in decile_bins(ncit, &idx).into_iter().enumerate() {
            let x: Vec<T> = bin.iter().map(|&i| asp[i]).collect();
            let y: Vec<T> = bin.iter().map(|&i| T::from_u32(ncit[i]).unwrap()).collect();
            rows.push(DecileRow {
                group: group.clone(),
                decile: k + 1,
                n: bin.len(),
                r: pearson(&x, &y).ok(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariateBin<T> {
    /// `"0"` to `"10"`, or `"11+"`.
    pub label: String,
    pub n: usize,
    pub median: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariateAssociation<T> {
    pub r: T,
    pub bins: Vec<CovariateBin<T>>,
}

const COVARIATE_OPEN_BIN: u32 = 11;

/// Correlation of prestige with an integer covariate (coauthors or
/// references) and the median prestige per covariate value, with values of
/// 11 and above pooled. Empty bins are omitted.
pub fn covariate_association<T: Scalar>(
    asp: &[T],
    covariate: &[u32],
) -> Result<CovariateAssociation<T>> {
    let cov: Vec<T> = covariate.iter().map(|&c| T::from_u32(c).unwrap()).collect();
    let r = pearson(asp, &cov)?;
    let mut bins: BTreeMap<u32, Vec<T>> = BTreeMap::new();
    for (&a, &c) in asp.iter().zip(covariate) {
        bins.entry(c.min(COVARIATE_OPEN_BIN)).or_default().push(a);
    }
    let bins = bins
        .into_iter()
        .map(|(key, vals)| CovariateBin {
            label: if key == COVARIATE_OPEN_BIN {
                format!("{COVARIATE_OPEN_BIN}+")
            } else {
                key.to_string()
            },
            n: vals.len(),
            median: median_sorted(&sorted_copy(&vals)),
        })
        .collect();
    Ok(CovariateAssociation { r, bins })
}
