//! Gumbel characterization of the mutual information under best-window
//! positioning.
//!
//! Writing `M = L - n_t + 1`, the centering and scale of the maximum window
//! gain are `xi + phi = d_M` and `beta = c_M`. Pushing the Gumbel limit
//! through `log2(1 + rho z)` and keeping the first-order term gives
//!
//! ```text
//! theta = xi + phi + gamma * beta
//! mu    = log2(1 + rho * theta)
//! sigma = beta * rho * log2(e) / (1 + rho * theta)
//! I ~ Gumbel[mu - gamma * sigma; sigma]
//! ```
//!
//! All mutual-information quantities are in bits; the EVT constants use the
//! natural log.

use serde::Serialize;

use super::normalization::{norm_seq_a, norm_seq_c, norm_seq_d};
use super::{GumbelParams, EULER_GAMMA};
use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub xi: f64,
    pub phi: f64,
    pub beta: f64,
    pub theta: f64,
    /// Mean of the limiting law, bits.
    pub mu: f64,
    /// Gumbel scale, bits.
    pub sigma: f64,
}

impl AsymptoticParams {
    pub fn gumbel(&self) -> GumbelParams {
        GumbelParams::new(self.mu - EULER_GAMMA * self.sigma, self.sigma)
            .expect("sigma is checked positive on construction")
    }

    /// `pi^2 sigma^2 / 6`.
    pub fn variance(&self) -> f64 {
        std::f64::consts::PI.powi(2) * self.sigma * self.sigma / 6.0
    }
}

pub fn asymptotic_params(config: &SystemConfig) -> Result<AsymptoticParams> {
    let m = config.n_windows();
    let n_t = config.n_t();
    let violated = |reason: String| Error::RegimeViolated {
        n_windows: m,
        n_t,
        reason,
    };
    if m < 2 {
        return Err(violated(
            "at least two array positions are needed".to_string(),
        ));
    }
    let xi = norm_seq_a(m, n_t);
    let phi = norm_seq_d(m, n_t)? - xi;
    let beta = norm_seq_c(m, n_t)?;
    let theta = xi + phi + EULER_GAMMA * beta;

    let rho = config.rho();
    let gain = 1.0 + rho * theta;
    if !(gain > 0.0) {
        return Err(violated(format!("1 + rho * theta = {gain} is not positive")));
    }
    let mu = gain.log2();
    let sigma = beta * rho * std::f64::consts::LOG2_E / gain;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(violated(format!("scale sigma = {sigma} is not positive")));
    }
    Ok(AsymptoticParams {
        xi,
        phi,
        beta,
        theta,
        mu,
        sigma,
    })
}

/// Limiting Gumbel law of the mutual information, in bits.
pub fn asymptotic_mi_distribution(config: &SystemConfig) -> Result<GumbelParams> {
    asymptotic_params(config).map(|p| p.gumbel())
}

/// Ergodic capacity predicted by the limiting law: its mean `mu`, in bits.
pub fn asymptotic_ergodic_capacity(config: &SystemConfig) -> Result<f64> {
    asymptotic_params(config).map(|p| p.mu)
}

/// Exact CDF of the maximum window gain when `n_t = 1`: the `L` gains are
/// i.i.d. unit exponentials, so `Pr{z_max <= z} = (1 - e^{-z})^L`.
pub fn exact_max_cdf_single_antenna(z: f64, config: &SystemConfig) -> Result<f64> {
    if config.n_t() != 1 {
        return domain(format!(
            "exact maximum law needs n_t = 1, got {}",
            config.n_t()
        ));
    }
    if z.is_nan() {
        return domain("window gain is NaN");
    }
    if z <= 0.0 {
        return Ok(0.0);
    }
    let l = config.apertures() as f64;
    Ok((l * (-(-z).exp()).ln_1p()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize, n_t: usize, rho: f64) -> SystemConfig {
        SystemConfig::new(l, n_t, rho).unwrap()
    }

    #[test]
    fn single_aperture_reference_values() {
        let p = asymptotic_params(&cfg(128, 1, 1.0)).unwrap();
        assert_eq!(p.phi, 0.0);
        assert_eq!(p.beta, 1.0);
        assert!((p.xi - 128f64.ln()).abs() < 1e-15);
        assert!((p.theta - 5.429_245_928_821_15).abs() < 1e-12);
        assert!((p.mu - 2.684_649_537_157_262_5).abs() < 1e-12);
    }

    #[test]
    fn theta_identity() {
        for n_t in [1, 2, 4, 8, 16] {
            let p = asymptotic_params(&cfg(128, n_t, 1.0)).unwrap();
            assert_eq!(p.theta, p.xi + p.phi + EULER_GAMMA * p.beta);
        }
    }

    #[test]
    fn gumbel_mean_is_mu() {
        let c = cfg(128, 4, 1.0);
        let g = asymptotic_mi_distribution(&c).unwrap();
        let mu = asymptotic_ergodic_capacity(&c).unwrap();
        assert!((g.mean() - mu).abs() < 1e-12);
    }

    #[test]
    fn capacity_increases_with_snr() {
        let mut prev = 0.0;
        for db in (-20..=20).step_by(5) {
            let rho = 10f64.powf(db as f64 / 10.0);
            let c = asymptotic_ergodic_capacity(&cfg(128, 2, rho)).unwrap();
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn single_window_is_rejected() {
        assert!(matches!(
            asymptotic_params(&cfg(4, 4, 1.0)),
            Err(Error::RegimeViolated { .. })
        ));
    }

    #[test]
    fn exact_max_cdf() {
        let c = cfg(128, 1, 1.0);
        assert_eq!(exact_max_cdf_single_antenna(0.0, &c).unwrap(), 0.0);
        assert_eq!(exact_max_cdf_single_antenna(f64::INFINITY, &c).unwrap(), 1.0);
        assert!((exact_max_cdf_single_antenna(1e3, &c).unwrap() - 1.0).abs() < 1e-15);
        let at_log_l = exact_max_cdf_single_antenna(128f64.ln(), &c).unwrap();
        let expected = (1.0 - 1.0 / 128.0f64).powi(128);
        assert!((at_log_l - expected).abs() < 1e-14);
        assert!((at_log_l - (-1f64).exp()).abs() < 2e-3);
        assert!(exact_max_cdf_single_antenna(1.0, &cfg(128, 2, 1.0)).is_err());
    }
}
