//! Normalization constants for the maximum of `m` window gains.
//!
//! With `k = n_t - 1` and `delta = 1[n_t != 1]`:
//!
//! ```text
//! a_m = ln(m / k!) + delta * k * ln k
//! d_m = a_m + delta * (k / a_m) * [1 + (n_t + a_m - 1) * ln(a_m / k)]
//! c_m = (d_m^2 + k d_m) / (d_m^2 - k (k - 1))
//! ```
//!
//! so that `(z_max - d_m) / c_m` is approximately standard Gumbel.

use super::ln_factorial;
use crate::error::{Error, Result};

fn delta(n_t: usize) -> f64 {
    if n_t != 1 {
        1.0
    } else {
        0.0
    }
}

fn violated(m: usize, n_t: usize, reason: String) -> Error {
    Error::RegimeViolated {
        n_windows: m,
        n_t,
        reason,
    }
}

/// Base centering `a_m`. Reduces to `ln m` for a single-aperture array.
pub fn norm_seq_a(m: usize, n_t: usize) -> f64 {
    let mut a = (m as f64).ln() - ln_factorial(n_t.saturating_sub(1));
    if n_t > 1 {
        let k = (n_t - 1) as f64;
        a += delta(n_t) * k * k.ln();
    }
    a
}

/// Refined centering `d_m`. Requires `a_m > 0` when `n_t >= 2`.
pub fn norm_seq_d(m: usize, n_t: usize) -> Result<f64> {
    let a = norm_seq_a(m, n_t);
    if n_t == 1 {
        return Ok(a);
    }
    if !(a > 0.0) {
        return Err(violated(
            m,
            n_t,
            format!("base centering a_m = {a} is not positive"),
        ));
    }
    Ok(phi_from_xi(a, n_t) + a)
}

/// Scale `c_m`. Requires `d_m^2 > (n_t - 1)(n_t - 2)`.
pub fn norm_seq_c(m: usize, n_t: usize) -> Result<f64> {
    let d = norm_seq_d(m, n_t)?;
    scale_from_location(d, n_t).map_err(|reason| violated(m, n_t, reason))
}

/// Centering correction `phi = d - a` written as a function of `xi = a`.
pub fn phi_from_xi(xi: f64, n_t: usize) -> f64 {
    if n_t == 1 {
        return 0.0;
    }
    let k = (n_t - 1) as f64;
    delta(n_t) * (k / xi) * (1.0 + (n_t as f64 + xi - 1.0) * (xi / k).ln())
}

/// Scale as a function of the full centering `xi + phi`.
pub fn beta_from_centering(centering: f64, n_t: usize) -> std::result::Result<f64, String> {
    scale_from_location(centering, n_t)
}

fn scale_from_location(d: f64, n_t: usize) -> std::result::Result<f64, String> {
    let k = (n_t - 1) as f64;
    let den = d * d - k * (k - 1.0);
    if !(den > 0.0) {
        return Err(format!("scale denominator d^2 - k(k-1) = {den} is not positive"));
    }
    let c = (d * d + k * d) / den;
    if !(c.is_finite() && c > 0.0) {
        return Err(format!("scale c = {c} is not positive"));
    }
    Ok(c)
}
