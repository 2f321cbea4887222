//! Search over damping factor and citing window.
//!
//! For every `(d, w)` cell the prestige vector is solved on the windowed
//! graph and, per analysis year, compared across subjects: the deviation is
//! the sum over subjects of `|mean_s - mean_all|`. The cell with the lowest
//! total deviation across years is selected.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{ArticleRecord, RawEdge, Table, Value};
use crate::engine::{compute_asp, AspConfig};
use crate::error::{Error, Result};
use crate::graph::{build_graph, filter_window, CitationGraph, PreprocessPolicy};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid<T> {
    pub d_values: Vec<T>,
    pub w_values: Vec<u32>,
    /// Inclusive analysis-year interval.
    pub years: (i32, i32),
}

impl<T: Scalar> Default for SweepGrid<T> {
    fn default() -> Self {
        SweepGrid {
            d_values: (1..=9).map(|k| T::from_f64_lossy(k as f64 / 10.0)).collect(),
            w_values: (1..=10).collect(),
            years: (1990, 2015),
        }
    }
}

impl<T: Scalar> SweepGrid<T> {
    pub fn validate(&self) -> Result<()> {
        if self.d_values.is_empty() || self.w_values.is_empty() {
            return Err(Error::invalid("sweep grid must be non-empty"));
        }
        if let Some(d) = self
            .d_values
            .iter()
            .find(|&&d| !(d > T::zero() && d < T::one()))
        {
            return Err(Error::invalid(format!(
                "damping factor must satisfy 0 < d < 1, got {d}"
            )));
        }
        if self.w_values.contains(&0) {
            return Err(Error::invalid("citing window must be at least 1 year"));
        }
        if self.years.0 > self.years.1 {
            return Err(Error::invalid("sweep year interval is empty"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    /// Sum of absolute differences.
    #[default]
    L1,
    /// Euclidean norm of the differences.
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOptions<T> {
    pub epsilon: T,
    pub max_iterations: usize,
    pub aggregator: Aggregator,
    /// Solve each cell on the graph restricted to its citing window. When
    /// off, every cell solves on the full graph and `w` does not change
    /// the prestige values.
    pub window_asp_graph: bool,
}

impl<T: Scalar> Default for SweepOptions<T> {
    fn default() -> Self {
        SweepOptions {
            epsilon: T::from_f64_lossy(0.01),
            max_iterations: 100,
            aggregator: Aggregator::L1,
            window_asp_graph: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearDeviation<T> {
    pub value: T,
    pub n_articles: usize,
}

impl<T> YearDeviation<T> {
    /// Year without articles; the value is defined as zero.
    pub fn is_empty(&self) -> bool {
        self.n_articles == 0
    }
}

/// Year slice of the prestige vector. Sums are taken relative to the
/// year's first value so that a constant vector yields exactly zero
/// differences.
struct YearGroups<T> {
    reference: T,
    /// Mean minus `reference`.
    grand_offset: T,
    n: usize,
    /// (offset sum, count) per subject id present in the year.
    subjects: BTreeMap<u32, (T, usize)>,
}

fn year_groups<T: Scalar>(asp: &[T], graph: &CitationGraph, year: i32) -> YearGroups<T> {
    let mut reference = None;
    let mut total = T::zero();
    let mut n = 0usize;
    let mut subjects: BTreeMap<u32, (T, usize)> = BTreeMap::new();
    for v in (0..graph.n()).filter(|&v| graph.year(v) == year) {
        let x = asp[v] - *reference.get_or_insert(asp[v]);
        total = total + x;
        n += 1;
        for &s in graph.subjects(v) {
            let e = subjects.entry(s).or_insert((T::zero(), 0));
            e.0 = e.0 + x;
            e.1 += 1;
        }
    }
    YearGroups {
        reference: reference.unwrap_or_else(T::zero),
        grand_offset: if n > 0 {
            total / T::from_usize_lossy(n)
        } else {
            T::zero()
        },
        n,
        subjects,
    }
}

/// Cross-subject deviation of one year's prestige values.
///
/// Every subject an article lists counts it fully.
pub fn subject_deviation<T: Scalar>(
    asp: &[T],
    graph: &CitationGraph,
    year: i32,
    aggregator: Aggregator,
) -> Result<YearDeviation<T>> {
    if asp.len() != graph.n() {
        return Err(Error::LengthMismatch {
            left: asp.len(),
            right: graph.n(),
        });
    }
    let g = year_groups(asp, graph, year);
    if g.n == 0 {
        log::warn!("no articles in year {year}; deviation set to 0");
    }
    let diffs = g
        .subjects
        .values()
        .map(|&(sum, count)| sum / T::from_usize_lossy(count) - g.grand_offset);
    let value = match aggregator {
        Aggregator::L1 => diffs.map(T::abs).sum(),
        Aggregator::L2 => diffs.map(|x| x * x).sum::<T>().sqrt(),
    };
    Ok(YearDeviation {
        value,
        n_articles: g.n,
    })
}

/// Noise level of the L1 deviation when subject labels carry no signal:
/// the sum over subjects of `sd * sqrt(1/n_s - 1/n)`, the standard error of
/// a subject mean around the grand mean under random labelling.
pub fn deviation_standard_error<T: Scalar>(asp: &[T], graph: &CitationGraph, year: i32) -> T {
    let g = year_groups(asp, graph, year);
    if g.n < 2 {
        return T::zero();
    }
    let mean = g.reference + g.grand_offset;
    let var = (0..graph.n())
        .filter(|&v| graph.year(v) == year)
        .map(|v| (asp[v] - mean).powi(2))
        .sum::<T>()
        / T::from_usize_lossy(g.n - 1);
    let inv_n = T::one() / T::from_usize_lossy(g.n);
    g.subjects
        .values()
        .map(|&(_, count)| {
            let f = (T::one() / T::from_usize_lossy(count) - inv_n).max(T::zero());
            (var * f).sqrt()
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell<T> {
    pub d: T,
    pub w: u32,
    pub iterations: usize,
    pub converged: bool,
    /// Deviation per analysis year, aligned with [`SweepResult::years`].
    pub per_year: Vec<T>,
    /// Sum of `per_year`; `None` when the solve did not converge.
    pub total: Option<T>,
    /// Analysis years without articles.
    pub empty_years: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<T> {
    pub d_values: Vec<T>,
    pub w_values: Vec<u32>,
    pub years: Vec<i32>,
    /// Row-major over `(d, w)`.
    pub cells: Vec<SweepCell<T>>,
    pub optimum: Option<(T, u32)>,
    pub tie_break: &'static str,
}

pub const TIE_BREAK: &str = "lowest total deviation; ties: larger window, then damping closest to 0.5, then smaller damping";

impl<T: Scalar> SweepResult<T> {
    pub fn cell(&self, d_idx: usize, w_idx: usize) -> &SweepCell<T> {
        &self.cells[d_idx * self.w_values.len() + w_idx]
    }

    /// Long table `d, w, year, deviation` with one `total` row per cell.
    pub fn long_table(&self) -> Table {
        let mut t = Table::new(["d", "w", "year", "deviation"]);
        for c in &self.cells {
            for (&y, &v) in self.years.iter().zip(&c.per_year) {
                t.push_unchecked(vec![
                    Value::from(c.d.as_f64()),
                    Value::from(c.w),
                    Value::from(y),
                    Value::from(c.converged.then(|| v.as_f64())),
                ]);
            }
            t.push_unchecked(vec![
                Value::from(c.d.as_f64()),
                Value::from(c.w),
                Value::from("total"),
                Value::from(c.total.map(|v| v.as_f64())),
            ]);
        }
        t
    }

    /// Totals with `d` down the rows and `w` across the columns.
    pub fn heat_table(&self) -> Table {
        let mut columns = vec!["d".to_string()];
        columns.extend(self.w_values.iter().map(|w| format!("w{w}")));
        let mut t = Table::new(columns);
        for (di, d) in self.d_values.iter().enumerate() {
            let mut row = vec![Value::from(d.as_f64())];
            row.extend(
                (0..self.w_values.len())
                    .map(|wi| Value::from(self.cell(di, wi).total.map(|v| v.as_f64()))),
            );
            t.push_unchecked(row);
        }
        t
    }
}

fn tie_key<T: Scalar>(d: T, w: u32) -> (std::cmp::Reverse<u32>, T, T) {
    let half = T::from_f64_lossy(0.5);
    (std::cmp::Reverse(w), (d - half).abs(), d)
}

/// Cell with the smallest total deviation under [`TIE_BREAK`].
pub fn select_optimal<T: Scalar>(sweep: &SweepResult<T>) -> Result<(T, u32)> {
    select_from(&sweep.cells)
}

fn select_from<T: Scalar>(cells: &[SweepCell<T>]) -> Result<(T, u32)> {
    let mut best: Option<&SweepCell<T>> = None;
    for c in cells {
        let Some(total) = c.total else { continue };
        best = match best {
            None => Some(c),
            Some(b) => {
                let bt = b.total.unwrap();
                let better = total < bt
                    || (total == bt
                        && tie_key(c.d, c.w).partial_cmp(&tie_key(b.d, b.w))
                            == Some(std::cmp::Ordering::Less));
                Some(if better { c } else { b })
            }
        };
    }
    best.map(|c| (c.d, c.w)).ok_or(Error::NoValidCell)
}

/// Sweeps the grid over an already built full-corpus graph.
pub fn sweep_graph<T: Scalar>(
    graph: &CitationGraph,
    grid: &SweepGrid<T>,
    options: &SweepOptions<T>,
) -> Result<SweepResult<T>> {
    grid.validate()?;
    let windowed: Vec<CitationGraph> = if options.window_asp_graph {
        grid.w_values
            .par_iter()
            .map(|&w| filter_window(graph, w))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let years: Vec<i32> = (grid.years.0..=grid.years.1).collect();
    let jobs: Vec<(usize, usize)> = (0..grid.d_values.len())
        .flat_map(|di| (0..grid.w_values.len()).map(move |wi| (di, wi)))
        .collect();

    let cells = jobs
        .par_iter()
        .map(|&(di, wi)| {
            let d = grid.d_values[di];
            let w = grid.w_values[wi];
            let g = windowed.get(wi).unwrap_or(graph);
            let config = AspConfig {
                damping: d,
                epsilon: options.epsilon,
                max_iterations: options.max_iterations,
                deterministic: true,
            };
            let asp = compute_asp(g, &config)?;
            let mut per_year = Vec::with_capacity(years.len());
            let mut empty_years = 0;
            for &y in &years {
                let dev = subject_deviation(&asp.values, g, y, options.aggregator)?;
                empty_years += usize::from(dev.is_empty());
                per_year.push(dev.value);
            }
            let total = asp.converged.then(|| per_year.iter().copied().sum());
            Ok(SweepCell {
                d,
                w,
                iterations: asp.iterations,
                converged: asp.converged,
                per_year,
                total,
                empty_years,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let optimum = select_from(&cells).ok();
    Ok(SweepResult {
        d_values: grid.d_values.clone(),
        w_values: grid.w_values.clone(),
        years,
        cells,
        optimum,
        tie_break: TIE_BREAK,
    })
}

/// Builds the graph under `policy` and sweeps `grid`.
pub fn run_sweep<T: Scalar>(
    articles: &[ArticleRecord],
    edges: &[RawEdge],
    policy: &PreprocessPolicy,
    grid: &SweepGrid<T>,
    options: &SweepOptions<T>,
) -> Result<SweepResult<T>> {
    let (graph, _) = build_graph(articles, edges, policy)?;
    sweep_graph(&graph, grid, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::graph;

    fn cell(d: f64, w: u32, total: Option<f64>) -> SweepCell<f64> {
        SweepCell {
            d,
            w,
            iterations: 1,
            converged: total.is_some(),
            per_year: vec![],
            total,
            empty_years: 0,
        }
    }

    #[test]
    fn unique_minimum() {
        let cells = [cell(0.3, 2, Some(1.0)), cell(0.7, 4, Some(0.5))];
        assert_eq!(select_from(&cells).unwrap(), (0.7, 4));
    }

    #[test]
    fn tie_prefers_larger_window_then_central_damping() {
        let cells = [cell(0.5, 3, Some(1.0)), cell(0.5, 5, Some(1.0))];
        assert_eq!(select_from(&cells).unwrap(), (0.5, 5));
        let cells = [cell(0.2, 5, Some(1.0)), cell(0.6, 5, Some(1.0)), cell(0.9, 5, Some(1.0))];
        assert_eq!(select_from(&cells).unwrap(), (0.6, 5));
    }

    #[test]
    fn invalid_cells_skipped() {
        let cells = [cell(0.5, 3, None), cell(0.1, 1, Some(9.0))];
        assert_eq!(select_from(&cells).unwrap(), (0.1, 1));
        assert!(matches!(
            select_from(&[cell(0.5, 3, None)]),
            Err(Error::NoValidCell)
        ));
    }

    fn subject_graph(subjects: &[&[&str]]) -> CitationGraph {
        use crate::corpus::ArticleRecord;
        use crate::graph::{build_graph, PreprocessPolicy};
        let articles: Vec<_> = subjects
            .iter()
            .enumerate()
            .map(|(k, s)| ArticleRecord {
                article_id: format!("N{k}"),
                year: 2000,
                subjects: s.iter().map(|x| x.to_string()).collect(),
                journal_id: None,
                n_coauthors: 1,
                n_references_declared: 1,
            })
            .collect();
        let policy = PreprocessPolicy {
            drop_no_subject: false,
            ..Default::default()
        };
        build_graph(&articles, &[], &policy).unwrap().0
    }

    #[test]
    fn two_subject_arithmetic() {
        let g = subject_graph(&[&["a"], &["a"], &["b"], &["b"]]);
        let asp = [0.5f64, 0.7, 0.7, 0.9];
        let dev = subject_deviation(&asp, &g, 2000, Aggregator::L1).unwrap();
        assert!((dev.value - 0.2).abs() < 1e-12);
        let l2 = subject_deviation(&asp, &g, 2000, Aggregator::L2).unwrap();
        assert!((l2.value - 0.02f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn equal_values_zero_deviation_and_empty_year() {
        let g = subject_graph(&[&["a"], &["b", "a"], &["c"]]);
        let dev = subject_deviation(&[0.8; 3], &g, 2000, Aggregator::L1).unwrap();
        assert_eq!(dev.value, 0.0);
        let empty = subject_deviation(&[0.8; 3], &g, 1999, Aggregator::L1).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn grid_validation() {
        let mut grid = SweepGrid::<f64>::default();
        assert_eq!(grid.d_values.len(), 9);
        assert_eq!(grid.w_values, (1..=10).collect::<Vec<_>>());
        grid.d_values.push(1.0);
        assert!(grid.validate().is_err());
        let grid = SweepGrid::<f64> {
            w_values: vec![0],
            ..Default::default()
        };
        assert!(grid.validate().is_err());
    }

    #[test]
    fn singleton_grid_composes() {
        let g = graph(
            &[("A", 1990), ("B", 1991), ("C", 1992)],
            &[("C", "A"), ("C", "B"), ("B", "A")],
        );
        let grid = SweepGrid {
            d_values: vec![0.5],
            w_values: vec![5],
            years: (1990, 1992),
        };
        let sweep = sweep_graph(&g, &grid, &SweepOptions::default()).unwrap();
        assert_eq!(sweep.optimum, Some((0.5, 5)));
        assert_eq!(select_optimal(&sweep).unwrap(), (0.5, 5));
        assert_eq!(sweep.long_table().len(), 4);
        assert_eq!(sweep.heat_table().columns(), &["d", "w5"]);
    }
}
