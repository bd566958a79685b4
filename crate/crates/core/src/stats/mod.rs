//! Pure statistics over score samples.

mod kde;
mod kl;
mod order;
mod sample;
mod summary;

pub use kde::{silverman_bandwidth, Density, KERNEL_CUTOFF};
pub use kl::{compare, kl_divergence, ComparisonReport, KlEstimate, DEFAULT_GRID_POINTS, DEFAULT_PDF_FLOOR};
pub use order::{empirical_cdf, inverse_cdf_curve, quantile};
pub use sample::ScoreSample;
pub use summary::{summarize, SummaryStats, DECILES};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("score at index {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("quantile level {0} outside its domain")]
    QuantileDomain(f64),
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("bandwidth must be positive and finite, got {0}")]
    Bandwidth(f64),
    #[error("pdf floor must be positive and finite, got {0}")]
    PdfFloor(f64),
}
