//! Full-run scheduling: full computes at activation steps, predictions
//! everywhere else.
//!
//! Timesteps are processed from T down to 1. A step is an activation when
//! `t mod interval == 0`, plus a forced activation at the very first step so
//! the run never predicts from an empty cache when T is not aligned to the
//! interval. Skipped steps are predicted with horizon equal to the gap from
//! the last activation, which coincides with `t mod interval` on the aligned
//! grid and stays within 1..interval-1 after a forced off-grid activation.
//!
//! The run is open loop: predicted features are recorded but never fed back
//! into the oracle or the cache.

use crate::basis::BasisConfig;
use crate::cache::{CacheError, DerivativeCache};
use crate::feature::{FeatureVector, Trajectory};
use crate::predictor::{PredictError, predict};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum ScheduleError {
    #[error("total steps must be at least 1")]
    ZeroSteps,

    #[error("oracle failed at t = {t}: {message}")]
    Oracle { t: i64, message: String },

    #[error("oracle dimension drifted at t = {t}: expected {expected}, found {found}")]
    DimensionDrift {
        t: i64,
        expected: usize,
        found: usize,
    },

    #[error("ground truth does not cover t = {t}")]
    TruthMissing { t: i64 },

    #[error("timestep {t} equals the last activation step")]
    ZeroHorizon { t: i64 },

    #[error(transparent)]
    Cache(#[from] CacheError),

    #[error(transparent)]
    Predict(#[from] PredictError),
}

/// Timestep direction of a run. The sampling loop convention is descending;
/// the variant exists so an ascending mode can be added without breaking the
/// config layout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Direction {
    #[default]
    Descending,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleConfig {
    pub total_steps: u32,
    pub interval: u32,
    pub basis: BasisConfig,
    pub direction: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMode {
    Full,
    Predicted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub t: i64,
    pub mode: StepMode,
    pub feature: FeatureVector,
    /// L2 distance to the ground-truth feature, when truth was provided.
    pub error_vs_truth: Option<f64>,
}

/// Record of one scheduled run: per-step outputs in processing order
/// (t = T down to 1) and the number of full oracle computes.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleTrace {
    records: Vec<StepRecord>,
    oracle_calls: usize,
}

impl ScheduleTrace {
    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn oracle_calls(&self) -> usize {
        self.oracle_calls
    }

    pub fn total_steps(&self) -> usize {
        self.records.len()
    }

    pub fn skipped_steps(&self) -> usize {
        self.records.len() - self.oracle_calls
    }

    pub fn skipped_fraction(&self) -> f64 {
        self.skipped_steps() as f64 / self.records.len() as f64
    }

    /// Call-count proxy for the speedup: total steps over full computes.
    pub fn speedup_proxy(&self) -> f64 {
        self.records.len() as f64 / self.oracle_calls as f64
    }

    fn mse_for(&self, mode: StepMode) -> Option<f64> {
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut dim = 0usize;
        for record in &self.records {
            if record.mode == mode {
                let err = record.error_vs_truth?;
                sum += err * err;
                count += 1;
                dim = record.feature.dim();
            }
        }
        (count > 0).then(|| sum / (count * dim) as f64)
    }

    /// Mean squared error per element over predicted steps, when truth was
    /// provided and at least one step was predicted.
    pub fn mse_predicted(&self) -> Option<f64> {
        self.mse_for(StepMode::Predicted)
    }

    /// Mean squared error per element over full-compute steps.
    pub fn mse_full(&self) -> Option<f64> {
        self.mse_for(StepMode::Full)
    }
}

/// Source of fully computed features.
pub trait FeatureOracle {
    fn eval(&mut self, t: i64) -> Result<FeatureVector, String>;
}

impl<F> FeatureOracle for F
where
    F: FnMut(i64) -> Result<FeatureVector, String>,
{
    fn eval(&mut self, t: i64) -> Result<FeatureVector, String> {
        self(t)
    }
}

/// Oracle backed by a recorded trajectory.
pub struct TrajectoryOracle<'a> {
    trajectory: &'a Trajectory,
}

impl<'a> TrajectoryOracle<'a> {
    pub fn new(trajectory: &'a Trajectory) -> Self {
        Self { trajectory }
    }
}

impl FeatureOracle for TrajectoryOracle<'_> {
    fn eval(&mut self, t: i64) -> Result<FeatureVector, String> {
        self.trajectory
            .feature_at(t)
            .cloned()
            .ok_or_else(|| format!("trajectory has no feature at t = {t}"))
    }
}

/// Wrapper that burns a configurable amount of CPU per call, so wall-clock
/// gains from skipping full computes are observable alongside call counts.
pub struct BusyOracle<O> {
    inner: O,
    spin_iterations: u64,
}

impl<O: FeatureOracle> BusyOracle<O> {
    pub fn new(inner: O, spin_iterations: u64) -> Self {
        Self {
            inner,
            spin_iterations,
        }
    }
}

impl<O: FeatureOracle> FeatureOracle for BusyOracle<O> {
    fn eval(&mut self, t: i64) -> Result<FeatureVector, String> {
        let mut acc = 0u64;
        for i in 0..self.spin_iterations {
            acc = std::hint::black_box(acc.wrapping_add(i).rotate_left(7));
        }
        std::hint::black_box(acc);
        self.inner.eval(t)
    }
}

/// Positive gap between a step and the last activation step.
pub fn horizon_of(t: i64, t_last: i64) -> Result<usize, ScheduleError> {
    if t == t_last {
        return Err(ScheduleError::ZeroHorizon { t });
    }
    Ok(t.abs_diff(t_last) as usize)
}

/// Run the schedule over timesteps T down to 1.
///
/// When `truth` is provided it must cover every timestep in [1, T]; per-step
/// L2 errors against it are recorded in the trace.
pub fn run_schedule<O: FeatureOracle>(
    config: &ScheduleConfig,
    oracle: &mut O,
    truth: Option<&Trajectory>,
) -> Result<ScheduleTrace, ScheduleError> {
    if config.total_steps == 0 {
        return Err(ScheduleError::ZeroSteps);
    }
    let interval = i64::from(config.interval);
    let mut cache = DerivativeCache::new(config.interval, config.basis.max_order())?;
    let mut records = Vec::with_capacity(config.total_steps as usize);
    let mut oracle_calls = 0usize;
    let mut dim: Option<usize> = None;

    for t in (1..=i64::from(config.total_steps)).rev() {
        let activate = cache.is_empty() || t % interval == 0;
        let (mode, feature) = if activate {
            let feature = oracle
                .eval(t)
                .map_err(|message| ScheduleError::Oracle { t, message })?;
            if let Some(expected) = dim
                && feature.dim() != expected
            {
                return Err(ScheduleError::DimensionDrift {
                    t,
                    expected,
                    found: feature.dim(),
                });
            }
            dim = Some(feature.dim());
            oracle_calls += 1;
            cache = cache.update(feature.clone(), t)?;
            (StepMode::Full, feature)
        } else {
            let t_last = cache.t_last().expect("cache is warm after first step");
            let horizon = horizon_of(t, t_last)?;
            let prediction = predict(&cache, &config.basis, horizon)?;
            (StepMode::Predicted, prediction.feature)
        };

        let error_vs_truth = match truth {
            Some(truth) => {
                let reference = truth
                    .feature_at(t)
                    .ok_or(ScheduleError::TruthMissing { t })?;
                Some(reference.l2_distance(&feature))
            }
            None => None,
        };

        records.push(StepRecord {
            t,
            mode,
            feature,
            error_vs_truth,
        });
    }

    Ok(ScheduleTrace {
        records,
        oracle_calls,
    })
}
