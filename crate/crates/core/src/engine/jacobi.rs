use rayon::prelude::*;

use super::{AspConfig, AspResult};
use crate::error::Result;
use crate::graph::CitationGraph;
use crate::scalar::Scalar;

const CHUNK: usize = 4096;
/// In non-deterministic mode, rows with more citers than this are reduced
/// in parallel.
const WIDE_ROW: usize = 1 << 14;

/// Solves for article prestige by Jacobi iteration from the all-ones
/// vector.
///
/// Each sweep reads only the previous vector and writes disjoint chunks of
/// the next one, so the work is split over the current rayon pool without
/// locks. In deterministic mode every node sums its citers in CSR order,
/// which makes the result independent of the thread count.
pub fn compute_asp<T: Scalar>(graph: &CitationGraph, config: &AspConfig<T>) -> Result<AspResult<T>> {
    config.validate()?;
    let n = graph.n();
    let d = config.damping;
    let floor = T::one() - d;

    let inv_refs: Vec<T> = (0..n)
        .into_par_iter()
        .map(|j| match graph.out_degree(j) {
            0 => T::zero(),
            m => T::one() / T::from_usize_lossy(m),
        })
        .collect();

    let mut prev = vec![T::one(); n];
    let mut next = vec![T::zero(); n];
    let mut share = vec![T::zero(); n];
    let mut residuals = Vec::new();
    let mut converged = false;

    while residuals.len() < config.max_iterations {
        share
            .par_chunks_mut(CHUNK)
            .zip(prev.par_chunks(CHUNK))
            .zip(inv_refs.par_chunks(CHUNK))
            .for_each(|((s, x), w)| {
                for ((s, &x), &w) in s.iter_mut().zip(x).zip(w) {
                    *s = x * w;
                }
            });

        let share = &share;
        next.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, out)| {
                let start = c * CHUNK;
                for (k, slot) in out.iter_mut().enumerate() {
                    let citers = graph.citers(start + k);
                    let inflow = if !config.deterministic && citers.len() > WIDE_ROW {
                        citers.par_iter().map(|&j| share[j as usize]).sum::<T>()
                    } else {
                        citers
                            .iter()
                            .fold(T::zero(), |acc, &j| acc + share[j as usize])
                    };
                    *slot = floor + d * inflow;
                }
            });

        let r = prev
            .par_chunks(CHUNK)
            .zip(next.par_chunks(CHUNK))
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(&a, &b)| (b - a).abs())
                    .fold(T::zero(), T::max)
            })
            .reduce(T::zero, T::max);
        residuals.push(r);
        std::mem::swap(&mut prev, &mut next);
        if r < config.epsilon {
            converged = true;
            break;
        }
    }

    Ok(AspResult {
        iterations: residuals.len(),
        values: prev,
        residuals,
        converged,
    })
}
