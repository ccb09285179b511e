//! Feature extrapolation from a derivative cache.
//!
//! The prediction for horizon k (k steps past the last activation, toward
//! lower timesteps) is
//!
//! ```text
//! F̂ = diffs[0] + Σ_{i=1..m} diffs[i] / i! · basis(i, -k)
//! ```
//!
//! with m the smaller of the configured order and the depth the cache has
//! warmed up to. The basis is either the plain monomial (-k)^i or the scaled
//! Hermite value σ^i·H_i(-σk). At order 0 this degenerates to plain feature
//! reuse.

use crate::basis::{BasisConfig, BasisError, basis_value};
use crate::cache::DerivativeCache;
use crate::feature::FeatureVector;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PredictError {
    #[error("cannot predict from an empty cache")]
    EmptyCache,

    #[error("horizon 0 is rejected by default; the Hermite basis is not the identity at k = 0")]
    ZeroHorizon,

    #[error("horizon {horizon} is out of range for interval {interval}")]
    HorizonOutOfRange { horizon: usize, interval: u32 },

    #[error("prediction overflowed to a non-finite value at order {order}")]
    NonFinite { order: usize },

    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// An extrapolated feature together with the horizon and the expansion order
/// actually used.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub feature: FeatureVector,
    pub horizon: usize,
    pub order_used: usize,
}

/// Predict the feature k steps past the last activation.
///
/// The horizon must satisfy 1 ≤ k ≤ interval − 1. Horizon 0 is rejected
/// because the Hermite basis carries non-zero even-order terms at k = 0;
/// use [`predict_diagnostic`] to evaluate out-of-range horizons anyway.
pub fn predict(
    cache: &DerivativeCache,
    config: &BasisConfig,
    horizon: usize,
) -> Result<Prediction, PredictError> {
    if horizon == 0 {
        return Err(PredictError::ZeroHorizon);
    }
    if horizon as u64 > u64::from(cache.interval()) - 1 {
        return Err(PredictError::HorizonOutOfRange {
            horizon,
            interval: cache.interval(),
        });
    }
    predict_diagnostic(cache, config, horizon)
}

/// [`predict`] without the horizon range checks, for diagnostics such as
/// probing the k = 0 discrepancy of the Hermite basis.
pub fn predict_diagnostic(
    cache: &DerivativeCache,
    config: &BasisConfig,
    horizon: usize,
) -> Result<Prediction, PredictError> {
    if cache.is_empty() {
        return Err(PredictError::EmptyCache);
    }
    let diffs = cache.diffs();
    let order_used = config.max_order().min(cache.available_order());
    let step = -(horizon as f64);

    let mut out: Vec<f64> = diffs[0].values().to_vec();
    let mut factorial = 1.0;
    for (i, diff) in diffs.iter().enumerate().take(order_used + 1).skip(1) {
        factorial *= i as f64;
        // One basis evaluation per order, shared across all dimensions.
        let coeff = basis_value(config, i, step)? / factorial;
        if !coeff.is_finite() {
            return Err(PredictError::NonFinite { order: i });
        }
        let mut finite = true;
        for (acc, d) in out.iter_mut().zip(diff.values()) {
            *acc += coeff * d;
            finite &= acc.is_finite();
        }
        if !finite {
            return Err(PredictError::NonFinite { order: i });
        }
    }

    Ok(Prediction {
        feature: FeatureVector::new(out).expect("finite accumulation checked per order"),
        horizon,
        order_used,
    })
}
