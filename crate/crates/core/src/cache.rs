//! Order-indexed finite-difference derivative cache.
//!
//! The cache is refreshed only at activation steps. Each refresh stores the
//! raw feature as order 0 and rebuilds every higher order from the recursion
//!
//! ```text
//! new[k+1] = (new[k] - old[k]) / (t - t_last)
//! ```
//!
//! where the divisor is the signed timestep gap. With the sampling loop
//! running from T down to 1 the gap is negative, which is exactly what makes
//! each entry approximate the derivative with respect to the timestep
//! variable: on an affine trajectory F_t = a + b·t the first-order entry is
//! b, not -b. The signed form also stays correct for ascending timestep
//! streams.
//!
//! During warm-up the stored order depth grows by one per activation until
//! `max_order + 1` entries exist; the predictor truncates its expansion to
//! whatever depth is available.

use crate::feature::FeatureVector;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CacheError {
    #[error("activation interval must be at least 1")]
    ZeroInterval,

    #[error("feature dimension {found} does not match cache dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("activation at t = {t} repeats the previous activation timestep")]
    ZeroTimeGap { t: i64 },
}

/// Finite-difference approximations of feature derivatives, anchored at the
/// most recent activation step.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeCache {
    diffs: Vec<FeatureVector>,
    t_last: Option<i64>,
    interval: u32,
    max_order: usize,
    activations_seen: u64,
}

impl DerivativeCache {
    /// Empty cache. Predicting against it is an error until the first
    /// activation lands.
    pub fn new(interval: u32, max_order: usize) -> Result<Self, CacheError> {
        if interval == 0 {
            return Err(CacheError::ZeroInterval);
        }
        Ok(Self {
            diffs: Vec::new(),
            t_last: None,
            interval,
            max_order,
            activations_seen: 0,
        })
    }

    /// Ingest a fully computed feature at activation timestep `t`, returning
    /// the refreshed cache. The receiver is left untouched so callers can
    /// compare against the previous state.
    pub fn update(&self, feature: FeatureVector, t: i64) -> Result<Self, CacheError> {
        if let Some(first) = self.diffs.first()
            && first.dim() != feature.dim()
        {
            return Err(CacheError::DimensionMismatch {
                expected: first.dim(),
                found: feature.dim(),
            });
        }

        let mut new_diffs = Vec::with_capacity(self.max_order + 1);
        new_diffs.push(feature.values().to_vec());

        if let Some(t_last) = self.t_last {
            if t == t_last {
                return Err(CacheError::ZeroTimeGap { t });
            }
            let dt = (t - t_last) as f64;
            let depth = self.diffs.len().min(self.max_order);
            for k in 0..depth {
                let old = self.diffs[k].values();
                let next: Vec<f64> = new_diffs[k]
                    .iter()
                    .zip(old)
                    .map(|(new, old)| (new - old) / dt)
                    .collect();
                new_diffs.push(next);
            }
        }

        let diffs = new_diffs
            .into_iter()
            .map(|values| {
                FeatureVector::new(values).expect("finite inputs produce finite differences")
            })
            .collect();

        Ok(Self {
            diffs,
            t_last: Some(t),
            interval: self.interval,
            max_order: self.max_order,
            activations_seen: self.activations_seen + 1,
        })
    }

    /// Difference vectors; index i holds the order-i approximation.
    pub fn diffs(&self) -> &[FeatureVector] {
        &self.diffs
    }

    pub fn is_empty(&self) -> bool {
        self.diffs.is_empty()
    }

    /// Highest difference order currently available (0 when only the raw
    /// feature is cached).
    pub fn available_order(&self) -> usize {
        self.diffs.len().saturating_sub(1)
    }

    pub fn t_last(&self) -> Option<i64> {
        self.t_last
    }

    pub fn interval(&self) -> u32 {
        self.interval
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn activations_seen(&self) -> u64 {
        self.activations_seen
    }

    pub fn dim(&self) -> Option<usize> {
        self.diffs.first().map(FeatureVector::dim)
    }
}
