//! Constant-free analytic error envelopes for the two prediction bases.
//!
//! These are diagnostic shapes, not certified bounds: the unknown constants
//! in front are dropped, so only ratios and monotone trends are meaningful.

fn factorial(n: usize) -> f64 {
    let mut f = 1.0;
    for i in 2..=n {
        f *= i as f64;
    }
    f
}

/// Envelope of the monomial-basis truncation error at the given expansion
/// order and horizon: |k|^(order+1) / (order+1)! · sup_deriv.
pub fn taylor_error_envelope(order: usize, horizon: f64, sup_deriv: f64) -> f64 {
    let k = horizon.abs();
    k.powi(order as i32 + 1) / factorial(order + 1) * sup_deriv
}

/// Envelope of the scaled-Hermite truncation error:
/// (σ·√2·|ds|)^(order+1) / √((order+1)!) · exp((σ·ds)²/2).
pub fn hermite_truncation_envelope(order: usize, sigma: f64, ds: f64) -> f64 {
    let x = sigma * std::f64::consts::SQRT_2 * ds.abs();
    let amplitude = (sigma * ds) * (sigma * ds) / 2.0;
    x.powi(order as i32 + 1) / factorial(order + 1).sqrt() * amplitude.exp()
}
