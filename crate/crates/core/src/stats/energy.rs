//! Energy test for multivariate normality.
//!
//! The sample is whitened with its own mean and a symmetric factorization of
//! its covariance, then compared against a seeded Monte-Carlo standard-normal
//! reference through the energy statistic
//!
//! ```text
//! E = n · (2·A - B - C)
//! ```
//!
//! where A is the mean sample-to-reference distance, B the mean distance
//! within the reference and C the mean distance within the sample, all three
//! over ordered pairs. With that convention 2A - B - C is the squared energy
//! distance between the two empirical measures, so the statistic is never
//! negative. The p-value comes from null replicates: freshly drawn
//! standard-normal samples of the same size pushed through the same pipeline
//! against the same reference, which keeps the observed and null statistics
//! exchangeable under the null hypothesis and the test exactly calibrated.
//! Replicates run in parallel with per-replicate derived seeds, so results
//! do not depend on scheduling.

use crate::feature::FeatureVector;
use crate::linalg::symmetric_eigen;
use crate::rng::SplitMix64;
use crate::stats::StatsError;
use rayon::prelude::*;

/// Condition number above which whitening falls back to a pseudo-inverse of
/// the covariance.
const CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyTestConfig {
    /// Size of the Monte-Carlo standard-normal reference sample.
    pub n_mc_reference: usize,
    /// Number of null replicates behind the p-value; at least 99.
    pub n_replicates: usize,
    pub seed: u64,
}

impl EnergyTestConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            n_mc_reference: 2048,
            n_replicates: 199,
            seed,
        }
    }

    pub fn with_reference_size(mut self, n_mc_reference: usize) -> Self {
        self.n_mc_reference = n_mc_reference;
        self
    }

    pub fn with_replicates(mut self, n_replicates: usize) -> Self {
        self.n_replicates = n_replicates;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyTestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_samples: usize,
    pub dim: usize,
    pub n_mc_reference: usize,
    pub n_replicates: usize,
    pub seed: u64,
    /// Condition estimate of the sample covariance (max over min eigenvalue).
    pub covariance_condition: f64,
    /// True when whitening dropped near-null covariance directions.
    pub pseudo_inverse: bool,
}

struct Whitened {
    rows: Vec<f64>,
    condition: f64,
    pseudo_inverse: bool,
}

/// Center and whiten `rows` (n×d row-major) with the sample mean and the
/// inverse symmetric square root of the sample covariance.
///
/// A sample whose covariance is indistinguishable from the rounding residue
/// of its own magnitudes (top eigenvalue at or below (1e-12·scale)²) is
/// degenerate — e.g. one value repeated n times — and is rejected rather
/// than silently whitened into noise.
fn whiten(rows: &[f64], n: usize, d: usize) -> Result<Whitened, StatsError> {
    let magnitude = rows.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut mean = vec![0.0; d];
    for row in rows.chunks_exact(d) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }

    let mut centered = rows.to_vec();
    for row in centered.chunks_exact_mut(d) {
        for (v, m) in row.iter_mut().zip(&mean) {
            *v -= m;
        }
    }

    let mut covariance = vec![0.0; d * d];
    for row in centered.chunks_exact(d) {
        for i in 0..d {
            for j in 0..=i {
                covariance[i * d + j] += row[i] * row[j];
            }
        }
    }
    let normalizer = 1.0 / (n as f64 - 1.0);
    for i in 0..d {
        for j in 0..=i {
            let v = covariance[i * d + j] * normalizer;
            covariance[i * d + j] = v;
            covariance[j * d + i] = v;
        }
    }

    let (eigenvalues, vectors) = symmetric_eigen(&covariance, d);
    let lambda_max = eigenvalues[0];
    let lambda_min = eigenvalues[d - 1];
    let rounding_floor = (1e-12 * magnitude) * (1e-12 * magnitude);
    if lambda_max <= rounding_floor || lambda_max.is_nan() {
        return Err(StatsError::SingularCovariance {
            condition: f64::INFINITY,
        });
    }
    let condition = if lambda_min > 0.0 {
        lambda_max / lambda_min
    } else {
        f64::INFINITY
    };
    let pseudo_inverse = condition > CONDITION_LIMIT;

    // W = V·diag(w)·Vᵀ with w = 1/√λ, zeroing near-null directions in the
    // pseudo-inverse regime.
    let cutoff = lambda_max / CONDITION_LIMIT;
    let weights: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 })
        .collect();
    let mut transform = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut sum = 0.0;
            for (k, w) in weights.iter().enumerate() {
                sum += vectors[i * d + k] * w * vectors[j * d + k];
            }
            transform[i * d + j] = sum;
        }
    }

    let mut out = vec![0.0; n * d];
    for (row_in, row_out) in centered.chunks_exact(d).zip(out.chunks_exact_mut(d)) {
        for i in 0..d {
            let mut sum = 0.0;
            for j in 0..d {
                sum += transform[i * d + j] * row_in[j];
            }
            row_out[i] = sum;
        }
    }

    Ok(Whitened {
        rows: out,
        condition,
        pseudo_inverse,
    })
}

#[inline]
fn distance(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        sum += diff * diff;
    }
    sum.sqrt()
}

/// Mean distance over all ordered cross pairs.
fn mean_cross_distance(a: &[f64], b: &[f64], d: usize) -> f64 {
    let mut sum = 0.0;
    for row_a in a.chunks_exact(d) {
        for row_b in b.chunks_exact(d) {
            sum += distance(row_a, row_b);
        }
    }
    sum / ((a.len() / d) as f64 * (b.len() / d) as f64)
}

/// Mean distance over ordered within-sample pairs (self-pairs contribute
/// zero). This is the V-statistic form that keeps 2A - B - C non-negative.
fn mean_within_distance(a: &[f64], d: usize) -> f64 {
    let n = a.len() / d;
    let mut sum = 0.0;
    for i in 0..n {
        let row_i = &a[i * d..(i + 1) * d];
        for j in (i + 1)..n {
            sum += distance(row_i, &a[j * d..(j + 1) * d]);
        }
    }
    2.0 * sum / (n as f64 * n as f64)
}

fn energy_statistic(sample: &[f64], n: usize, reference: &[f64], b_mean: f64, d: usize) -> f64 {
    let a_mean = mean_cross_distance(sample, reference, d);
    let c_mean = mean_within_distance(sample, d);
    n as f64 * (2.0 * a_mean - b_mean - c_mean)
}

fn standard_normal_rows(rng: &mut SplitMix64, n: usize, d: usize) -> Vec<f64> {
    let mut rows = vec![0.0; n * d];
    rng.fill_normals(&mut rows);
    rows
}

/// Test `samples` for multivariate normality.
///
/// Requires at least dim + 2 samples so the sample covariance can be
/// non-singular. The returned p-value carries the finite-sample correction
/// (1 + #{null ≥ observed}) / (n_replicates + 1).
pub fn energy_test(
    samples: &[FeatureVector],
    config: &EnergyTestConfig,
) -> Result<EnergyTestResult, StatsError> {
    let n = samples.len();
    let Some(first) = samples.first() else {
        return Err(StatsError::TooFewSamples {
            needed: 3,
            dim: 0,
            got: 0,
        });
    };
    let d = first.dim();
    for (index, sample) in samples.iter().enumerate() {
        if sample.dim() != d {
            return Err(StatsError::InconsistentSampleDims {
                first: d,
                other: sample.dim(),
                index,
            });
        }
    }
    if n < d + 2 {
        return Err(StatsError::TooFewSamples {
            needed: d + 2,
            dim: d,
            got: n,
        });
    }
    if config.n_replicates < 99 {
        return Err(StatsError::TooFewReplicates {
            got: config.n_replicates,
        });
    }
    if config.n_mc_reference < 2 {
        return Err(StatsError::TooFewReference {
            got: config.n_mc_reference,
        });
    }

    let mut rows = Vec::with_capacity(n * d);
    for sample in samples {
        rows.extend_from_slice(sample.values());
    }

    let whitened = whiten(&rows, n, d)?;

    // Substream 0 feeds the shared reference; replicate r uses substream r.
    let mut reference_rng = SplitMix64::substream(config.seed, 0);
    let reference = standard_normal_rows(&mut reference_rng, config.n_mc_reference, d);
    let b_mean = mean_within_distance(&reference, d);

    let observed = energy_statistic(&whitened.rows, n, &reference, b_mean, d);

    let null_statistics: Vec<f64> = (1..=config.n_replicates as u64)
        .into_par_iter()
        .map(|replicate| -> Result<f64, StatsError> {
            let mut rng = SplitMix64::substream(config.seed, replicate);
            let draw = standard_normal_rows(&mut rng, n, d);
            let white = whiten(&draw, n, d)?;
            Ok(energy_statistic(&white.rows, n, &reference, b_mean, d))
        })
        .collect::<Result<_, _>>()?;

    let at_least = null_statistics.iter().filter(|&&s| s >= observed).count();
    let p_value = (1 + at_least) as f64 / (config.n_replicates + 1) as f64;

    Ok(EnergyTestResult {
        statistic: observed,
        p_value,
        n_samples: n,
        dim: d,
        n_mc_reference: config.n_mc_reference,
        n_replicates: config.n_replicates,
        seed: config.seed,
        covariance_condition: whitened.condition,
        pseudo_inverse: whitened.pseudo_inverse,
    })
}
