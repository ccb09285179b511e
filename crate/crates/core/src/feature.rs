//! Feature vectors and time-indexed feature trajectories.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FeatureError {
    #[error("feature vector must have at least one entry")]
    Empty,

    #[error("feature entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("expected dimension {expected}, found {found} at step position {position}")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        position: usize,
    },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error(
        "trajectory timesteps must be strictly descending, violated at position {position} (t = {t})"
    )]
    NonDescending { position: usize, t: i64 },
}

/// A D-dimensional real feature activation.
///
/// Entries are validated to be finite on construction; a single NaN would
/// silently corrupt every higher-order difference built on top of it.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self, FeatureError> {
        if values.is_empty() {
            return Err(FeatureError::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(FeatureError::NonFinite { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Euclidean distance to `other`.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        self.squared_l2_distance(other).sqrt()
    }

    pub fn squared_l2_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.values
    }
}

/// A feature trajectory: strictly descending timesteps, uniform dimension.
///
/// The descending order matches the sampling loop convention (steps run from
/// T down to 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    dim: usize,
    steps: Vec<(i64, FeatureVector)>,
}

impl Trajectory {
    pub fn new(steps: Vec<(i64, FeatureVector)>) -> Result<Self, FeatureError> {
        let Some((_, first)) = steps.first() else {
            return Err(FeatureError::EmptyTrajectory);
        };
        let dim = first.dim();
        let mut prev_t = None;
        for (position, (t, feature)) in steps.iter().enumerate() {
            if feature.dim() != dim {
                return Err(FeatureError::DimensionMismatch {
                    expected: dim,
                    found: feature.dim(),
                    position,
                });
            }
            if let Some(prev) = prev_t
                && *t >= prev
            {
                return Err(FeatureError::NonDescending { position, t: *t });
            }
            prev_t = Some(*t);
        }
        Ok(Self { dim, steps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty trajectories
    }

    pub fn steps(&self) -> &[(i64, FeatureVector)] {
        &self.steps
    }

    /// Highest (first) timestep.
    pub fn t_max(&self) -> i64 {
        self.steps[0].0
    }

    /// Lowest (last) timestep.
    pub fn t_min(&self) -> i64 {
        self.steps[self.steps.len() - 1].0
    }

    /// Feature at timestep `t`, if present.
    pub fn feature_at(&self, t: i64) -> Option<&FeatureVector> {
        // Steps are strictly descending.
        self.steps
            .binary_search_by(|(step_t, _)| step_t.cmp(&t).reverse())
            .ok()
            .map(|i| &self.steps[i].1)
    }

    /// True when timesteps are exactly T, T-1, ..., 1.
    pub fn is_dense_to_one(&self) -> bool {
        self.t_min() == 1 && self.len() as i64 == self.t_max()
    }
}
