use serde::Serialize;

use crate::error::{domain, Result};

/// Scenario parameters for one run: `L` virtual apertures, an array spanning
/// `n_t` neighbouring apertures, and linear average SNR `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemConfig {
    apertures: usize,
    n_t: usize,
    rho: f64,
}

impl SystemConfig {
    pub fn new(apertures: usize, n_t: usize, rho: f64) -> Result<Self> {
        if n_t == 0 {
            return domain("array length n_t must be at least 1");
        }
        if apertures < n_t {
            return domain(format!(
                "L={apertures} is smaller than the array length n_t={n_t}"
            ));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return domain(format!("SNR must be positive and finite, got {rho}"));
        }
        Ok(Self {
            apertures,
            n_t,
            rho,
        })
    }

    /// Number of virtual apertures `L`.
    pub fn apertures(&self) -> usize {
        self.apertures
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Number of admissible array positions, `L - n_t + 1`.
    pub fn n_windows(&self) -> usize {
        self.apertures - self.n_t + 1
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.apertures, self.n_t, rho)
    }
}

/// An SNR value given in dB, converted to linear scale exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snr {
    db: f64,
    linear: f64,
}

impl Snr {
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return domain(format!("SNR in dB must be finite, got {db}"));
        }
        Ok(Self {
            db,
            linear: 10f64.powf(db / 10.0),
        })
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    pub fn linear(&self) -> f64 {
        self.linear
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_count() {
        let c = SystemConfig::new(128, 4, 1.0).unwrap();
        assert_eq!(c.n_windows(), 125);
        assert_eq!(SystemConfig::new(4, 4, 1.0).unwrap().n_windows(), 1);
    }

    #[test]
    fn rejects_invalid() {
        assert!(SystemConfig::new(10, 0, 1.0).is_err());
        assert!(SystemConfig::new(3, 4, 1.0).is_err());
        assert!(SystemConfig::new(10, 2, 0.0).is_err());
        assert!(SystemConfig::new(10, 2, -1.0).is_err());
        assert!(SystemConfig::new(10, 2, f64::INFINITY).is_err());
        assert!(SystemConfig::new(10, 2, f64::NAN).is_err());
    }

    #[test]
    fn zero_db_is_unit_snr() {
        assert_eq!(Snr::from_db(0.0).unwrap().linear(), 1.0);
        assert!((Snr::from_db(-20.0).unwrap().linear() - 0.01).abs() < 1e-15);
    }
}
