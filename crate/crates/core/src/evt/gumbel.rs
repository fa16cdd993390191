use rand::distr::Open01;
use rand::Rng;
use serde::Serialize;

use super::EULER_GAMMA;
use crate::error::{domain, Result};

/// Type-one Gumbel law with CDF `exp(-exp(-(x - location) / scale))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GumbelParams {
    location: f64,
    scale: f64,
}

impl GumbelParams {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() {
            return domain(format!("Gumbel location must be finite, got {location}"));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return domain(format!("Gumbel scale must be positive, got {scale}"));
        }
        Ok(Self { location, scale })
    }

    /// The standard law, location 0 and scale 1.
    pub fn standard() -> Self {
        Self {
            location: 0.0,
            scale: 1.0,
        }
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (-(-(x - self.location) / self.scale).exp()).exp()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let t = -(x - self.location) / self.scale;
        (t - t.exp()).exp() / self.scale
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("probability must lie in (0, 1), got {p}"));
        }
        Ok(self.location - self.scale * (-p.ln()).ln())
    }

    pub fn mean(&self) -> f64 {
        self.location + EULER_GAMMA * self.scale
    }

    pub fn variance(&self) -> f64 {
        std::f64::consts::PI.powi(2) * self.scale * self.scale / 6.0
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.location - self.scale * (-u.ln()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_at_location() {
        let g = GumbelParams::new(2.5, 0.3).unwrap();
        assert!((g.cdf(2.5) - (-1f64).exp()).abs() < 1e-16);
        assert!((g.quantile((-1f64).exp()).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn limits() {
        let g = GumbelParams::standard();
        assert_eq!(g.cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(g.cdf(f64::INFINITY), 1.0);
        assert!(g.cdf(-40.0) < 1e-300);
        assert!(1.0 - g.cdf(40.0) < 1e-16);
    }

    #[test]
    fn half_scale_point() {
        let g = GumbelParams::standard();
        let expected = (-(-0.5f64).exp()).exp();
        assert!((g.cdf(0.5) - expected).abs() < 1e-16);
    }

    #[test]
    fn median() {
        let q = GumbelParams::standard().quantile(0.5).unwrap();
        assert!((q - 0.366_512_920_581_664_3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GumbelParams::new(0.0, 0.0).is_err());
        assert!(GumbelParams::new(0.0, -1.0).is_err());
        assert!(GumbelParams::new(f64::NAN, 1.0).is_err());
        assert!(GumbelParams::standard().quantile(0.0).is_err());
        assert!(GumbelParams::standard().quantile(1.0).is_err());
    }

    #[test]
    fn round_trip() {
        let g = GumbelParams::new(-1.0, 2.0).unwrap();
        for p in [1e-6, 0.5, 1.0 - 1e-6] {
            let x = g.quantile(p).unwrap();
            assert!((g.cdf(x) - p).abs() <= 1e-12);
        }
    }
}
