//! Extreme-value analysis of a one-dimensional spatially reconfigurable
//! antenna array.
//!
//! An array of `n_t` antennas slides over `L` virtual apertures of an i.i.d.
//! Rayleigh channel and is parked on the window with the largest gain. The
//! maximum window gain, and with it the mutual information
//! `log2(1 + rho * z_max)`, is asymptotically type-one Gumbel.
//!
//! - [`evt`]: closed-form window-gain law, Gumbel law and the limit parameters
//! - [`channel`]: Monte-Carlo simulation of the positioning process
//! - [`stats`]: empirical CDFs, Kolmogorov–Smirnov distance, moments
//! - [`experiments`]: reproducible grid runs comparing the two

pub mod channel;
pub mod config;
pub mod error;
pub mod evt;
pub mod experiments;
pub mod rng;
pub mod stats;
mod sum;

pub use config::{Snr, SystemConfig};
pub use error::{Error, Result};
