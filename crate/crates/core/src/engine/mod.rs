//! Article prestige solver.
//!
//! The score of article `i` is the fixed point of
//!
//! ```text
//! asp[i] = (1 - d) + d * sum(asp[j] / m[j] for each j citing i)
//! ```
//!
//! where `m[j]` is the number of references of `j` and `d` the damping
//! factor. Articles without references pass nothing on; articles nobody
//! cites sit at the floor `1 - d`.

mod jacobi;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use jacobi::compute_asp;
pub use oracle::{compute_asp_dag_oracle, compute_asp_dense_oracle, DENSE_ORACLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AspConfig<T> {
    /// Damping factor in the open interval (0, 1).
    pub damping: T,
    /// Stop once the max-norm change between iterations drops below this.
    pub epsilon: T,
    pub max_iterations: usize,
    /// Fixed per-node summation order, bit-identical across thread counts.
    pub deterministic: bool,
}

impl<T: Scalar> Default for AspConfig<T> {
    fn default() -> Self {
        AspConfig {
            damping: T::from_f64_lossy(0.5),
            epsilon: T::from_f64_lossy(0.01),
            max_iterations: 100,
            deterministic: true,
        }
    }
}

impl<T: Scalar> AspConfig<T> {
    pub fn new(damping: T) -> Self {
        AspConfig {
            damping,
            ..Default::default()
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.damping > T::zero() && self.damping < T::one()) {
            return Err(Error::invalid(format!(
                "damping factor must satisfy 0 < d < 1, got {}",
                self.damping
            )));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        Ok(())
    }
}

/// Converged (or last) prestige vector plus convergence history.
#[derive(Debug, Clone, PartialEq)]
pub struct AspResult<T> {
    pub values: Vec<T>,
    pub iterations: usize,
    /// Max-norm change of each completed iteration.
    pub residuals: Vec<T>,
    pub converged: bool,
}

impl<T: Scalar> AspResult<T> {
    /// `sum(asp) / n`; equals 1 only when no prestige leaks through
    /// articles without references.
    pub fn mean(&self) -> T {
        if self.values.is_empty() {
            return T::zero();
        }
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.values.len())
    }
}

/// Largest absolute component-wise difference.
pub fn residual<T: Scalar>(prev: &[T], next: &[T]) -> Result<T> {
    if prev.len() != next.len() {
        return Err(Error::LengthMismatch {
            left: prev.len(),
            right: next.len(),
        });
    }
    Ok(prev
        .iter()
        .zip(next)
        .map(|(&a, &b)| (b - a).abs())
        .fold(T::zero(), T::max))
}
