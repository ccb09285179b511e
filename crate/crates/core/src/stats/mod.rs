//! Statistical toolkit: energy test for multivariate normality, prediction
//! error reports, and analytic error envelopes.

mod energy;
mod envelope;
mod eval;

pub use energy::{EnergyTestConfig, EnergyTestResult, energy_test};
pub use envelope::{hermite_truncation_envelope, taylor_error_envelope};
pub use eval::{ConfigReport, ErrorReport, RatioValue, difference_samples, non_cumulative_eval};

use crate::cache::CacheError;
use crate::feature::FeatureError;
use crate::predictor::PredictError;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum StatsError {
    #[error("interval must be at least 1")]
    ZeroInterval,

    #[error("interval {interval} leaves no horizons to evaluate; need at least 2")]
    IntervalTooSmallForHorizons { interval: u32 },

    #[error("no basis configs supplied")]
    NoConfigs,

    #[error("trajectory too short: need about {needed_steps} steps, have {available}")]
    InsufficientTrajectory {
        needed_steps: usize,
        available: usize,
    },

    #[error("trajectory has no feature at t = {t}")]
    MissingTimestep { t: i64 },

    #[error("need at least {needed} samples for dimension {dim}, got {got}")]
    TooFewSamples {
        needed: usize,
        dim: usize,
        got: usize,
    },

    #[error("samples have inconsistent dimensions: {first} vs {other} at index {index}")]
    InconsistentSampleDims {
        first: usize,
        other: usize,
        index: usize,
    },

    #[error(
        "sample covariance is singular (condition estimate {condition:e}); the sample is degenerate"
    )]
    SingularCovariance { condition: f64 },

    #[error("p-values need at least 99 null replicates, got {got}")]
    TooFewReplicates { got: usize },

    #[error("Monte-Carlo reference needs at least 2 draws, got {got}")]
    TooFewReference { got: usize },

    #[error(transparent)]
    Feature(#[from] FeatureError),

    #[error("cache construction failed: {0}")]
    Cache(CacheError),

    #[error("prediction failed: {0}")]
    Predict(PredictError),
}

impl StatsError {
    pub(crate) fn from_cache(err: CacheError) -> Self {
        StatsError::Cache(err)
    }

    pub(crate) fn from_predict(err: PredictError) -> Self {
        StatsError::Predict(err)
    }
}
