//! Fuzzy aggregate estimators and their confidence intervals.
//!
//! Tuples contribute by their exact membership degree (sigma-count); COUNT
//! and SUM are scaled up by `N / n`, AVG is a degree-weighted ratio. Two
//! interval families are offered: a Hoeffding bound that needs only a range,
//! and a CLT bound with finite-population correction.

mod aggregate;
mod interval;
mod normal;

pub use aggregate::{
    estimate_aggregate, estimate_avg, estimate_count, estimate_sum, tuple_degree, Contribution, GroupEstimate,
    IntervalBounds,
};
pub use interval::{conservative_interval, hoeffding_half_width, large_sample_interval};
pub use normal::{inverse_normal_cdf, normal_cdf, two_sided_z};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimateError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample of {sample} exceeds population {population}")]
    SampleExceedsPopulation { sample: usize, population: usize },
    #[error("sum of degrees is zero; average undefined")]
    ZeroSatisfaction,
    #[error("at least 2 observations needed, got {0}")]
    TooFewObservations(usize),
    #[error("confidence {0} must lie strictly between 0 and 1")]
    InvalidConfidence(f64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
}
