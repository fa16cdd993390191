//! Marginal law of a single window gain.
//!
//! A window covers `n_t` unit-variance complex Gaussian coefficients, so its
//! squared norm is Erlang(`n_t`, 1): a chi-squared variable with `2 n_t`
//! degrees of freedom in the unit-mean-per-component convention. For integer
//! shape the regularized lower incomplete gamma has a finite closed form,
//!
//! ```text
//! P(n, z) = 1 - e^{-z} * sum_{k=0}^{n-1} z^k / k!
//! ```
//!
//! which is evaluated directly for `z >= n`. Below the mode the complementary
//! Poisson tail `e^{-z} * sum_{k>=n} z^k / k!` is summed instead so small
//! probabilities keep their relative precision.

use super::ln_factorial;
use crate::error::{domain, Result};
use crate::sum::CompensatedSum;

fn check_shape(n_t: usize) -> Result<()> {
    if n_t == 0 {
        return domain("window length n_t must be at least 1");
    }
    Ok(())
}

/// `Pr{z_m <= z}` for a window of `n_t` apertures.
pub fn chi_squared_window_cdf(z: f64, n_t: usize) -> Result<f64> {
    check_shape(n_t)?;
    if z.is_nan() {
        return domain("window gain is NaN");
    }
    if z <= 0.0 {
        return Ok(0.0);
    }
    if z == f64::INFINITY {
        return Ok(1.0);
    }
    let n = n_t as f64;
    let ln_z = z.ln();
    if z < n {
        // Poisson upper tail: terms decrease since z / (k + 1) < 1 for k >= n.
        let mut term = (-z + n * ln_z - ln_factorial(n_t)).exp();
        let mut acc = CompensatedSum::default();
        let mut k = n;
        while term > 0.0 {
            acc.add(term);
            k += 1.0;
            term *= z / k;
            if term < acc.value() * 1e-18 {
                break;
            }
        }
        Ok(acc.value().clamp(0.0, 1.0))
    } else {
        let mut acc = CompensatedSum::default();
        let mut ln_fact = 0.0;
        for k in 0..n_t {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            acc.add((-z + k as f64 * ln_z - ln_fact).exp());
        }
        Ok((1.0 - acc.value()).clamp(0.0, 1.0))
    }
}

/// Density `w^{n_t-1} e^{-w} / (n_t-1)!` of a window gain.
pub fn chi_squared_window_pdf(z: f64, n_t: usize) -> Result<f64> {
    check_shape(n_t)?;
    if z.is_nan() {
        return domain("window gain is NaN");
    }
    if z < 0.0 {
        return Ok(0.0);
    }
    if z == 0.0 {
        return Ok(if n_t == 1 { 1.0 } else { 0.0 });
    }
    let k = (n_t - 1) as f64;
    Ok((k * z.ln() - z - ln_factorial(n_t - 1)).exp())
}

/// Inverse of [`chi_squared_window_cdf`] by bracketed bisection.
pub fn chi_squared_window_quantile(p: f64, n_t: usize) -> Result<f64> {
    check_shape(n_t)?;
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("probability must lie in (0, 1), got {p}"));
    }
    let mut lo = 0.0_f64;
    let mut hi = (n_t as f64).max(1.0);
    while chi_squared_window_cdf(hi, n_t)? < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi_squared_window_cdf(mid, n_t)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (
        chi_squared_window_cdf(lo, n_t)?,
        chi_squared_window_cdf(hi, n_t)?,
    );
    Ok(if (p - f_lo).abs() < (f_hi - p).abs() {
        lo
    } else {
        hi
    })
}
