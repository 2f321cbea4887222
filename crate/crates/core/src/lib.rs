//! Article prestige over citation networks.
//!
//! Prestige is a damped eigenvector centrality: every article starts with
//! one unit, keeps `1 - d` and passes the damped remainder to its references
//! in equal shares. The crate covers ingestion and preprocessing of citation
//! data ([`corpus`], [`graph`]), the parallel solver ([`engine`]), the search
//! over damping factor and citing window ([`tuner`]) and the descriptive
//! statistics used to compare prestige against raw citation counts
//! ([`metrics`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the command-line tool uses.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod scalar;
pub mod tuner;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type AspConfig = engine::AspConfig<f64>;
pub type AspResult = engine::AspResult<f64>;
pub type AspConfig32 = engine::AspConfig<f32>;
pub type AspResult32 = engine::AspResult<f32>;
pub type SummaryStats = metrics::SummaryStats<f64>;
pub type TailIndexEstimate = metrics::TailIndexEstimate<f64>;
pub type IntensityMatrix = metrics::IntensityMatrix<f64>;
pub type SweepResult = tuner::SweepResult<f64>;
