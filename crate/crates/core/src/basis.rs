//! Monomial and scaled-Hermite basis evaluation.
//!
//! Physicists' Hermite polynomials are evaluated through the three-term
//! recurrence H_{n+1}(x) = 2x·H_n(x) − 2n·H_{n−1}(x) with H_0 = 1 and
//! H_1 = 2x. The scaled variant contracts both the argument and the
//! coefficient scale: H̃_n(x) = σ^n·H_n(σx). The coefficient factor σ^n is
//! accumulated by repeated multiplication; the polynomials are never expanded
//! into monomial coefficients, which grow too fast to stay accurate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum BasisError {
    #[error("contraction factor must lie in (0, 1], got {sigma}")]
    InvalidSigma { sigma: f64 },

    #[error("basis order {requested} exceeds configured maximum {max_order}")]
    OrderOutOfRange { requested: usize, max_order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// Plain monomial basis: value step^n.
    TaylorMonomial,
    /// Contracted Hermite basis: value σ^n·H_n(σ·step).
    ScaledHermite,
}

/// Predictor basis selection: basis kind, contraction factor and maximum
/// expansion order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisConfig {
    kind: BasisKind,
    sigma: f64,
    max_order: usize,
}

impl BasisConfig {
    /// Monomial basis of the given maximum order. The contraction factor is
    /// unused and stored as 1.
    pub fn taylor(max_order: usize) -> Self {
        Self {
            kind: BasisKind::TaylorMonomial,
            sigma: 1.0,
            max_order,
        }
    }

    /// Scaled Hermite basis. `sigma` must lie in (0, 1]; σ = 1 means no
    /// contraction.
    pub fn scaled_hermite(sigma: f64, max_order: usize) -> Result<Self, BasisError> {
        validate_sigma(sigma)?;
        Ok(Self {
            kind: BasisKind::ScaledHermite,
            sigma,
            max_order,
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }
}

fn validate_sigma(sigma: f64) -> Result<(), BasisError> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(BasisError::InvalidSigma { sigma });
    }
    Ok(())
}

/// σ^n by repeated multiplication, matching the accumulation used everywhere
/// else so scaling identities hold bit-for-bit.
#[inline]
fn sigma_pow(sigma: f64, n: usize) -> f64 {
    let mut p = 1.0;
    for _ in 0..n {
        p *= sigma;
    }
    p
}

/// Physicists' Hermite polynomial H_n(x) via the three-term recurrence.
///
/// Finite inputs in the supported order range give finite outputs; extreme
/// arguments may overflow to infinity but never panic.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let mut prev = 1.0; // H_0
            let mut cur = 2.0 * x; // H_1
            for k in 1..n {
                let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Scaled Hermite polynomial H̃_n(x) = σ^n·H_n(σx) with σ in (0, 1].
pub fn scaled_hermite_eval(n: usize, x: f64, sigma: f64) -> Result<f64, BasisError> {
    validate_sigma(sigma)?;
    Ok(sigma_pow(sigma, n) * hermite_eval(n, sigma * x))
}

/// Value of the n-th basis function at `step`.
///
/// The predictor passes `step = -k` for a forward horizon of k steps. Order 0
/// is defined as 1 for both bases so the function is total, though the
/// predictor never requests it (the zeroth term is the cached feature
/// itself). Orders above the configured maximum are rejected.
pub fn basis_value(config: &BasisConfig, n: usize, step: f64) -> Result<f64, BasisError> {
    if n > config.max_order {
        return Err(BasisError::OrderOutOfRange {
            requested: n,
            max_order: config.max_order,
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    match config.kind {
        BasisKind::TaylorMonomial => {
            let mut p = 1.0;
            for _ in 0..n {
                p *= step;
            }
            Ok(p)
        }
        BasisKind::ScaledHermite => scaled_hermite_eval(n, step, config.sigma),
    }
}
