//! Synthetic feature-trajectory generators.
//!
//! Three generator families cover the evaluation protocol without any model
//! in the loop: draws from a Gaussian process with squared-exponential
//! kernel, the exact discrete AR(1) form of an Ornstein-Uhlenbeck process,
//! and random polynomials plus white noise. Dimensions are generated
//! independently from per-dimension substreams, so a seed fully determines
//! the trajectory and dimensions can be reproduced in isolation.

pub mod trace;

use crate::feature::{FeatureVector, Trajectory};
use crate::linalg::{cholesky_lower, lower_triangular_mul};
use crate::rng::SplitMix64;
use thiserror::Error;

/// Dense kernel factorization is cubic in T; beyond this many steps the
/// AR(1) generator is the right tool.
pub const MAX_GP_STEPS: usize = 2048;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GenerateError {
    #[error("dimension must be at least 1")]
    ZeroDim,

    #[error("total steps must be at least 1")]
    ZeroSteps,

    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("polynomial degree {degree} exceeds the supported maximum of 4")]
    DegreeTooLarge { degree: usize },

    #[error("{steps} steps exceeds the dense-kernel limit of {limit}; use the AR(1) generator")]
    TooManyStepsForDenseKernel { steps: usize, limit: usize },

    #[error(
        "kernel matrix is not positive definite even with jitter {max_jitter:e}; \
         increase the length scale"
    )]
    KernelNotPositiveDefinite { max_jitter: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorKind {
    /// Zero-mean Gaussian process with kernel
    /// amplitude²·exp(-(s-t)²/(2·length_scale²)) over the timestep grid.
    GpSquaredExponential { length_scale: f64, amplitude: f64 },
    /// Exact discretization of dX = -theta·X dt + noise·dW at unit step,
    /// started from x0.
    OrnsteinUhlenbeck { theta: f64, noise: f64, x0: f64 },
    /// Random polynomial of the given degree in normalized time t/T, with
    /// coefficients drawn from coeff_scale·N(0,1), plus white noise.
    PolyPlusNoise {
        degree: usize,
        coeff_scale: f64,
        noise: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub total_steps: usize,
    pub seed: u64,
}

fn require_positive(name: &'static str, value: f64) -> Result<(), GenerateError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(GenerateError::NonPositiveParameter { name, value });
    }
    Ok(())
}

fn require_non_negative(name: &'static str, value: f64) -> Result<(), GenerateError> {
    if !value.is_finite() || value < 0.0 {
        return Err(GenerateError::NegativeParameter { name, value });
    }
    Ok(())
}

/// Generate a trajectory over timesteps T, T-1, ..., 1. The seed fully
/// determines the output.
pub fn generate(spec: &GeneratorSpec) -> Result<Trajectory, GenerateError> {
    if spec.dim == 0 {
        return Err(GenerateError::ZeroDim);
    }
    if spec.total_steps == 0 {
        return Err(GenerateError::ZeroSteps);
    }

    // columns[d] holds dimension d in processing order (t = T first).
    let columns: Vec<Vec<f64>> = match spec.kind {
        GeneratorKind::GpSquaredExponential {
            length_scale,
            amplitude,
        } => gp_columns(spec, length_scale, amplitude)?,
        GeneratorKind::OrnsteinUhlenbeck { theta, noise, x0 } => {
            ou_columns(spec, theta, noise, x0)?
        }
        GeneratorKind::PolyPlusNoise {
            degree,
            coeff_scale,
            noise,
        } => poly_columns(spec, degree, coeff_scale, noise)?,
    };

    let t_top = spec.total_steps as i64;
    let steps: Vec<(i64, FeatureVector)> = (0..spec.total_steps)
        .map(|row| {
            let values: Vec<f64> = columns.iter().map(|col| col[row]).collect();
            (
                t_top - row as i64,
                FeatureVector::new(values).expect("generators produce finite values"),
            )
        })
        .collect();
    Ok(Trajectory::new(steps).expect("descending dense grid"))
}

fn gp_columns(
    spec: &GeneratorSpec,
    length_scale: f64,
    amplitude: f64,
) -> Result<Vec<Vec<f64>>, GenerateError> {
    require_positive("length_scale", length_scale)?;
    require_positive("amplitude", amplitude)?;
    let n = spec.total_steps;
    if n > MAX_GP_STEPS {
        return Err(GenerateError::TooManyStepsForDenseKernel {
            steps: n,
            limit: MAX_GP_STEPS,
        });
    }

    let variance = amplitude * amplitude;
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            // Grid positions are the timestep values; only gaps matter.
            let gap = (i as f64) - (j as f64);
            kernel[i * n + j] = variance * (-gap * gap / (2.0 * length_scale * length_scale)).exp();
        }
    }

    // The squared-exponential kernel is notoriously ill conditioned; escalate
    // diagonal jitter until the factorization succeeds.
    let mut factor = None;
    let mut jitter = 1e-10 * variance;
    let max_jitter = 1e-6 * variance;
    while factor.is_none() && jitter <= max_jitter * 1.0000001 {
        let mut jittered = kernel.clone();
        for i in 0..n {
            jittered[i * n + i] += jitter;
        }
        factor = cholesky_lower(&jittered, n);
        jitter *= 10.0;
    }
    let factor = factor.ok_or(GenerateError::KernelNotPositiveDefinite { max_jitter })?;

    let columns = (0..spec.dim)
        .map(|d| {
            let mut rng = SplitMix64::substream(spec.seed, d as u64);
            let mut z = vec![0.0; n];
            rng.fill_normals(&mut z);
            lower_triangular_mul(&factor, n, &z)
        })
        .collect();
    Ok(columns)
}

fn ou_columns(
    spec: &GeneratorSpec,
    theta: f64,
    noise: f64,
    x0: f64,
) -> Result<Vec<Vec<f64>>, GenerateError> {
    require_positive("theta", theta)?;
    require_non_negative("noise", noise)?;
    let n = spec.total_steps;
    let decay = (-theta).exp();
    let step_sd = noise * ((1.0 - (-2.0 * theta).exp()) / (2.0 * theta)).sqrt();

    let columns = (0..spec.dim)
        .map(|d| {
            let mut rng = SplitMix64::substream(spec.seed, d as u64);
            let mut col = Vec::with_capacity(n);
            let mut x = x0;
            col.push(x);
            for _ in 1..n {
                x = decay * x + step_sd * rng.next_normal();
                col.push(x);
            }
            col
        })
        .collect();
    Ok(columns)
}

fn poly_columns(
    spec: &GeneratorSpec,
    degree: usize,
    coeff_scale: f64,
    noise: f64,
) -> Result<Vec<Vec<f64>>, GenerateError> {
    if degree > 4 {
        return Err(GenerateError::DegreeTooLarge { degree });
    }
    require_non_negative("coeff_scale", coeff_scale)?;
    require_non_negative("noise", noise)?;
    let n = spec.total_steps;
    let t_top = spec.total_steps as f64;

    let columns = (0..spec.dim)
        .map(|d| {
            let mut rng = SplitMix64::substream(spec.seed, d as u64);
            let coeffs: Vec<f64> = (0..=degree)
                .map(|_| coeff_scale * rng.next_normal())
                .collect();
            (0..n)
                .map(|row| {
                    let tau = (t_top - row as f64) / t_top;
                    let mut value = 0.0;
                    for &c in coeffs.iter().rev() {
                        value = value * tau + c;
                    }
                    value + noise * rng.next_normal()
                })
                .collect()
        })
        .collect();
    Ok(columns)
}
