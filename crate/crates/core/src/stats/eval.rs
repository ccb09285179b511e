//! Non-cumulative prediction evaluation and finite-difference sampling.
//!
//! Every prediction task is anchored on ground-truth history only: the cache
//! is rebuilt from true activation samples at each anchor, so errors measure
//! basis quality in isolation rather than error feedback. The relative error
//! ratio R (reference MSE over comparison MSE, conventionally monomial over
//! Hermite) is the headline quantity; R > 1 means the comparison basis wins.

use crate::basis::BasisConfig;
use crate::cache::DerivativeCache;
use crate::feature::{FeatureVector, Trajectory};
use crate::predictor::predict;
use crate::stats::StatsError;

/// Order-`order` finite differences of `trajectory` at every eligible
/// activation anchor.
///
/// Anchors slide over the aligned activation grid (t divisible by
/// `interval`); an anchor t is eligible when every sample t, t-N, ..., t-kN
/// lies inside the trajectory. Differences follow the backward recursion
/// with step N directly.
pub fn difference_samples(
    trajectory: &Trajectory,
    interval: u32,
    order: usize,
) -> Result<Vec<FeatureVector>, StatsError> {
    if interval == 0 {
        return Err(StatsError::ZeroInterval);
    }
    let n = i64::from(interval);
    let span = order as i64 * n;
    let anchors: Vec<i64> = (trajectory.t_min()..=trajectory.t_max())
        .filter(|t| t.rem_euclid(n) == 0 && t - span >= trajectory.t_min())
        .rev()
        .collect();
    if anchors.is_empty() {
        return Err(StatsError::InsufficientTrajectory {
            needed_steps: (span + n) as usize,
            available: trajectory.len(),
        });
    }

    let mut out = Vec::with_capacity(anchors.len());
    for anchor in anchors {
        // Samples at anchor, anchor-N, ..., anchor-order·N.
        let mut table: Vec<Vec<f64>> = (0..=order)
            .map(|j| -> Result<Vec<f64>, StatsError> {
                let t = anchor - j as i64 * n;
                let feature = trajectory
                    .feature_at(t)
                    .ok_or(StatsError::MissingTimestep { t })?;
                Ok(feature.values().to_vec())
            })
            .collect::<Result<_, _>>()?;
        // Backward difference: level k replaces table[j] by
        // (table[j] - table[j+1]) / N.
        for level in 0..order {
            for j in 0..(order - level) {
                let (head, tail) = table.split_at_mut(j + 1);
                for (value, below) in head[j].iter_mut().zip(&tail[0]) {
                    *value = (*value - below) / n as f64;
                }
            }
        }
        out.push(FeatureVector::new(table.swap_remove(0))?);
    }
    Ok(out)
}

/// Ratio of two mean squared errors, or both values when the denominator
/// vanishes (as on exactly predictable trajectories).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RatioValue {
    Defined(f64),
    Undefined { reference_mse: f64, this_mse: f64 },
}

impl RatioValue {
    fn of(reference: f64, this: f64) -> Self {
        if this > 0.0 {
            RatioValue::Defined(reference / this)
        } else {
            RatioValue::Undefined {
                reference_mse: reference,
                this_mse: this,
            }
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            RatioValue::Defined(v) => Some(*v),
            RatioValue::Undefined { .. } => None,
        }
    }
}

/// Per-config evaluation results.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigReport {
    pub config: BasisConfig,
    /// MSE at horizon k, index k-1.
    pub per_horizon_mse: Vec<f64>,
    /// Running sum of per-horizon MSEs through horizon k, index k-1.
    pub cumulative_mse: Vec<f64>,
    /// Reference MSE over this config's MSE, per horizon.
    pub per_horizon_ratio: Vec<RatioValue>,
    /// Same ratio on cumulative MSEs.
    pub cumulative_ratio: Vec<RatioValue>,
}

/// Results of a non-cumulative evaluation sweep. Slot 0 of `entries` is the
/// reference config (conventionally the monomial basis); every slot's ratios
/// divide the reference MSE by that slot's MSE.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub interval: u32,
    pub anchors: usize,
    pub entries: Vec<ConfigReport>,
}

/// Evaluate `configs` on ground-truth anchors of `truth`.
///
/// Anchors lie on the aligned activation grid and are kept only when (a)
/// enough aligned history exists above them to warm the deepest requested
/// order fully, and (b) all horizons 1..interval-1 exist below them, so every
/// config is scored on the identical prediction tasks.
pub fn non_cumulative_eval(
    truth: &Trajectory,
    interval: u32,
    configs: &[BasisConfig],
) -> Result<ErrorReport, StatsError> {
    if interval < 2 {
        return Err(StatsError::IntervalTooSmallForHorizons { interval });
    }
    if configs.is_empty() {
        return Err(StatsError::NoConfigs);
    }
    let n = i64::from(interval);
    let max_order = configs.iter().map(BasisConfig::max_order).max().unwrap();
    let horizons = (interval - 1) as usize;

    let anchors: Vec<i64> = (truth.t_min()..=truth.t_max())
        .filter(|t| {
            t.rem_euclid(n) == 0
                && t + max_order as i64 * n <= truth.t_max()
                && t - i64::from(interval - 1) >= truth.t_min()
        })
        .rev()
        .collect();
    if anchors.is_empty() {
        return Err(StatsError::InsufficientTrajectory {
            needed_steps: ((max_order as i64 + 1) * n + i64::from(interval - 1)) as usize,
            available: truth.len(),
        });
    }

    let dim = truth.dim();
    let denom = (anchors.len() * dim) as f64;
    let mut per_horizon_sq: Vec<Vec<f64>> = vec![vec![0.0; horizons]; configs.len()];

    for &anchor in &anchors {
        for (slot, config) in configs.iter().enumerate() {
            // Warm the cache on ground-truth activation samples only,
            // highest timestep first.
            let mut cache = DerivativeCache::new(interval, config.max_order())
                .map_err(StatsError::from_cache)?;
            for j in (0..=max_order).rev() {
                let t = anchor + j as i64 * n;
                let feature = truth
                    .feature_at(t)
                    .ok_or(StatsError::MissingTimestep { t })?;
                cache = cache
                    .update(feature.clone(), t)
                    .map_err(StatsError::from_cache)?;
            }
            for k in 1..=horizons {
                let target_t = anchor - k as i64;
                let reference = truth
                    .feature_at(target_t)
                    .ok_or(StatsError::MissingTimestep { t: target_t })?;
                let prediction = predict(&cache, config, k).map_err(StatsError::from_predict)?;
                per_horizon_sq[slot][k - 1] += reference.squared_l2_distance(&prediction.feature);
            }
        }
    }

    let mse_table: Vec<Vec<f64>> = per_horizon_sq
        .into_iter()
        .map(|sums| sums.into_iter().map(|s| s / denom).collect())
        .collect();
    let reference_mse = mse_table[0].clone();
    let reference_cumulative: Vec<f64> = running_sum(&reference_mse);

    let entries = configs
        .iter()
        .zip(&mse_table)
        .map(|(config, mse)| {
            let cumulative = running_sum(mse);
            let per_horizon_ratio = reference_mse
                .iter()
                .zip(mse)
                .map(|(&r, &m)| RatioValue::of(r, m))
                .collect();
            let cumulative_ratio = reference_cumulative
                .iter()
                .zip(&cumulative)
                .map(|(&r, &m)| RatioValue::of(r, m))
                .collect();
            ConfigReport {
                config: *config,
                per_horizon_mse: mse.clone(),
                cumulative_mse: cumulative,
                per_horizon_ratio,
                cumulative_ratio,
            }
        })
        .collect();

    Ok(ErrorReport {
        interval,
        anchors: anchors.len(),
        entries,
    })
}

fn running_sum(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}
