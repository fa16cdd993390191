//! Closed-form analytics for the maximum window gain.
//!
//! The window gains `z_m` are Erlang(`n_t`, 1) distributed and `n_t`-dependent.
//! Their maximum over `L - n_t + 1` positions is approximated by a type-one
//! Gumbel law whose normalization constants are given in [`normalization`];
//! [`asymptotic`] maps that law through `log2(1 + rho z)` to obtain the
//! distribution of the mutual information.

pub mod asymptotic;
pub mod chi2;
pub mod gumbel;
pub mod normalization;

pub use asymptotic::{
    asymptotic_ergodic_capacity, asymptotic_mi_distribution, asymptotic_params,
    exact_max_cdf_single_antenna, AsymptoticParams,
};
pub use chi2::{chi_squared_window_cdf, chi_squared_window_pdf, chi_squared_window_quantile};
pub use gumbel::GumbelParams;
pub use normalization::{norm_seq_a, norm_seq_c, norm_seq_d};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Natural log of `n!`.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
