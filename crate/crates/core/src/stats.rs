//! Empirical distributions, Kolmogorov–Smirnov distance and moments.

use crate::error::{domain, Result};
use crate::evt::GumbelParams;

/// A distribution function that can be compared against an empirical CDF.
///
/// `cdf_left` is the left limit `F(x-)`; it equals `cdf` for continuous laws.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

impl Cdf for GumbelParams {
    fn cdf(&self, x: f64) -> f64 {
        GumbelParams::cdf(self, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return domain("empirical CDF needs at least one sample");
        }
        if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
            return domain(format!("non-finite sample {bad}"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Fraction of samples `< x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// Smallest sample `x` with `eval(x) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("probability must lie in [0, 1], got {p}"));
        }
        let n = self.len();
        let rank = (p * n as f64).ceil() as usize;
        Ok(self.sorted[rank.clamp(1, n) - 1])
    }
}

impl Cdf for EmpiricalCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.eval_left(x)
    }
}

/// Sup-distance between `ecdf` and `law`, taken over the jump points of the
/// empirical CDF on both sides of each jump.
pub fn ks_distance<C: Cdf + ?Sized>(ecdf: &EmpiricalCdf, law: &C) -> f64 {
    let n = ecdf.len() as f64;
    let xs = ecdf.sorted_values();
    let mut d = 0.0_f64;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let above = (j as f64 / n - law.cdf(x)).abs();
        let below = (i as f64 / n - law.cdf_left(x)).abs();
        d = d.max(above).max(below);
        i = j;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    /// Unbiased (n - 1) variance.
    pub variance: f64,
    pub std_error: f64,
}

/// Welford's update on data shifted by the first sample.
pub fn sample_moments(samples: &[f64]) -> Result<Moments> {
    if samples.len() < 2 {
        return domain(format!(
            "moments need at least two samples, got {}",
            samples.len()
        ));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return domain(format!("non-finite sample {bad}"));
    }
    let shift = samples[0];
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let y = x - shift;
        let delta = y - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (y - mean);
    }
    let n = samples.len() as f64;
    let variance = (m2 / (n - 1.0)).max(0.0);
    Ok(Moments {
        mean: mean + shift,
        variance,
        std_error: (variance / n).sqrt(),
    })
}

/// Pearson correlation of paired samples.
pub fn sample_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return domain("correlation needs equally long inputs");
    }
    let mx = sample_moments(x)?;
    let my = sample_moments(y)?;
    let cov: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx.mean) * (b - my.mean))
        .sum::<f64>()
        / (x.len() as f64 - 1.0);
    let den = (mx.variance * my.variance).sqrt();
    if !(den > 0.0) {
        return domain("correlation undefined for constant input");
    }
    Ok(cov / den)
}
