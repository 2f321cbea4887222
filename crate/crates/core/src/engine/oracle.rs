//! Reference solvers used to check [`compute_asp`](super::compute_asp).
//!
//! Both work in `f64` and share no code with the sparse iteration.

use super::AspConfig;
use crate::error::{Error, Result};
use crate::graph::{topological_order, CitationGraph, TopoOrder};

pub const DENSE_ORACLE_LIMIT: usize = 2000;
const DENSE_TOLERANCE: f64 = 1e-12;
const DENSE_MAX_ITERATIONS: usize = 1_000_000;

/// Exact prestige on an acyclic graph in one pass over a topological order
/// (citing articles first).
pub fn compute_asp_dag_oracle(graph: &CitationGraph, damping: f64) -> Result<Vec<f64>> {
    let order = match topological_order(graph) {
        TopoOrder::Acyclic(order) => order,
        TopoOrder::Cyclic(nodes) => return Err(Error::Cyclic { nodes }),
    };
    let mut asp = vec![f64::NAN; graph.n()];
    for &i in &order {
        let i = i as usize;
        let inflow: f64 = graph
            .citers(i)
            .iter()
            .map(|&j| asp[j as usize] / graph.out_degree(j as usize) as f64)
            .sum();
        asp[i] = (1.0 - damping) + damping * inflow;
    }
    Ok(asp)
}

/// Fixed point of the dense operator `x -> (1 - d) + d * L M^-1 x`, with
/// `L[i][j] = 1` when `j` cites `i` and `M = diag(m)`, iterated until the
/// max-norm change is below 1e-12.
pub fn compute_asp_dense_oracle(graph: &CitationGraph, config: &AspConfig<f64>) -> Result<Vec<f64>> {
    config.validate()?;
    let n = graph.n();
    if n > DENSE_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DENSE_ORACLE_LIMIT,
        });
    }
    let d = config.damping;
    let mut op = vec![0.0f64; n * n];
    for (j, i) in graph.edges() {
        op[i as usize * n + j as usize] = 1.0 / graph.out_degree(j as usize) as f64;
    }

    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    for _ in 0..DENSE_MAX_ITERATIONS {
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &op[i * n..(i + 1) * n];
            let dot: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            *yi = (1.0 - d) + d * dot;
        }
        let change = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);
        if change < DENSE_TOLERANCE {
            return Ok(x);
        }
    }
    Err(Error::InsufficientData(
        "dense oracle did not reach its tolerance".into(),
    ))
}
