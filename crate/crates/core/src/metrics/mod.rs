//! Descriptive and comparative statistics over prestige and citation
//! counts.
//!
//! Everything here is a pure function of its inputs. Quantiles use linear
//! interpolation between order statistics throughout.

mod cluster;
mod correlation;
mod intensity;
mod journal;
mod rank;
mod summary;
mod tail;

pub use cluster::{cluster_rollup, ClusterMap, RollupRow, RollupStat};
pub use correlation::{
    covariate_association, decile_bins, decile_correlations, pearson, CovariateAssociation,
    CovariateBin, DecileRow, N_DECILES,
};
pub use intensity::{cross_intensity, IntensityLevel, IntensityMatrix, IntensityOptions};
pub use journal::{
    journal_aggregate, normalize_journal, GradeRow, GradeTable, JournalAggregate, JOURNAL_STATS,
};
pub use rank::{
    discordant_share, noncited_ratio, percentile_floor, percentile_rank, percentile_ranks,
    NoncitedRow,
};
pub use summary::{quantile_sorted, summary_stats, SummaryStats};
pub use tail::{
    tail_index, tail_index_above, tail_index_series, TailIndexEstimate, TailSeriesRow,
    MIN_TAIL_SAMPLES,
};
