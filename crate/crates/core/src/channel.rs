//! Monte-Carlo model of best-window positioning over an i.i.d. Rayleigh
//! virtual channel with a single receive antenna.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::evt::chi_squared_window_quantile;
use crate::rng::Substreams;
use crate::sum::CompensatedSum;

/// Window sums are recomputed from scratch every this many positions.
pub const RESYNC_INTERVAL: usize = 1024;

/// Minimum marginal exceedance count for a dependency estimate to be trusted.
pub const MIN_EXCEEDANCES: u64 = 100;

/// Quantile levels of the window-gain law used as thresholds by default.
pub const DEFAULT_SWEEP_LEVELS: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Coefficients `h_1..h_L` from the virtual apertures to the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualChannel {
    coefficients: Vec<Complex64>,
}

impl VirtualChannel {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Per-aperture power `|h_l|^2`.
    pub fn powers(&self) -> Vec<f64> {
        self.coefficients.iter().map(|h| h.norm_sqr()).collect()
    }
}

#[inline]
fn draw_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Fills `out` with `len` aperture powers, consuming the stream exactly as
/// [`sample_virtual_channel`] would.
fn draw_powers<R: Rng + ?Sized>(len: usize, rng: &mut R, out: &mut Vec<f64>) {
    out.clear();
    out.extend((0..len).map(|_| draw_coefficient(rng).norm_sqr()));
}

/// Draws `L` i.i.d. CN(0, 1) coefficients.
pub fn sample_virtual_channel<R: Rng + ?Sized>(
    config: &SystemConfig,
    rng: &mut R,
) -> VirtualChannel {
    VirtualChannel::new((0..config.apertures()).map(|_| draw_coefficient(rng)).collect())
}

/// Gains `z_m` of every admissible array position and the best one.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowGainSequence {
    gains: Vec<f64>,
    argmax: usize,
}

impl WindowGainSequence {
    pub fn from_gains(gains: Vec<f64>) -> Result<Self> {
        if gains.is_empty() {
            return domain("window gain sequence is empty");
        }
        if let Some(bad) = gains.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return domain(format!("window gain {bad} is not a finite nonnegative value"));
        }
        let argmax = first_argmax(&gains);
        Ok(Self { gains, argmax })
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn n_windows(&self) -> usize {
        self.gains.len()
    }

    /// Zero-based index of the strongest window, lowest index on ties.
    pub fn argmax(&self) -> usize {
        self.argmax
    }

    pub fn max_gain(&self) -> f64 {
        self.gains[self.argmax]
    }
}

fn first_argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Sliding sums of `n_t` consecutive powers, written into `out`.
fn rolling_window_sums(powers: &[f64], n_t: usize, out: &mut Vec<f64>) {
    out.clear();
    if n_t == 1 {
        out.extend_from_slice(powers);
        return;
    }
    let windows = powers.len() + 1 - n_t;
    let mut acc = CompensatedSum::default();
    for m in 0..windows {
        if m % RESYNC_INTERVAL == 0 {
            acc = CompensatedSum::default();
            for &p in &powers[m..m + n_t] {
                acc.add(p);
            }
        } else {
            acc.add(powers[m + n_t - 1]);
            acc.add(-powers[m - 1]);
        }
        out.push(acc.value().max(0.0));
    }
}

pub fn window_gains(channel: &VirtualChannel, n_t: usize) -> Result<WindowGainSequence> {
    if n_t == 0 {
        return domain("array length n_t must be at least 1");
    }
    if n_t > channel.len() {
        return domain(format!(
            "array length n_t={n_t} exceeds the channel length {}",
            channel.len()
        ));
    }
    let mut gains = Vec::with_capacity(channel.len() + 1 - n_t);
    rolling_window_sums(&channel.powers(), n_t, &mut gains);
    let argmax = first_argmax(&gains);
    Ok(WindowGainSequence { gains, argmax })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    /// Zero-based window index `m* - 1`.
    pub index: usize,
    pub gain: f64,
}

/// The positioning rule: move the array to the strongest window.
pub fn position_array(gains: &WindowGainSequence) -> Position {
    Position {
        index: gains.argmax(),
        gain: gains.max_gain(),
    }
}

/// `log2(1 + rho z)` in bits.
pub fn mutual_information(rho: f64, gain: f64) -> f64 {
    (rho * gain).ln_1p() * std::f64::consts::LOG2_E
}

struct TrialBuffers {
    powers: Vec<f64>,
    gains: Vec<f64>,
}

impl TrialBuffers {
    fn new(config: &SystemConfig) -> Self {
        Self {
            powers: Vec::with_capacity(config.apertures()),
            gains: Vec::with_capacity(config.n_windows()),
        }
    }

    fn max_gain<R: Rng + ?Sized>(&mut self, config: &SystemConfig, rng: &mut R) -> f64 {
        draw_powers(config.apertures(), rng, &mut self.powers);
        rolling_window_sums(&self.powers, config.n_t(), &mut self.gains);
        self.gains[first_argmax(&self.gains)]
    }
}

/// `z_max` for one fresh channel draw.
pub fn max_gain_sample<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    TrialBuffers::new(config).max_gain(config, rng)
}

/// Mutual information, in bits, of one fresh channel draw after positioning.
pub fn mutual_information_sample<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> f64 {
    mutual_information(config.rho(), max_gain_sample(config, rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// `z_max` for `trials` independent draws; trial `i` uses substream `i`.
pub fn simulate_max_gains(
    config: &SystemConfig,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Vec<f64> {
    let streams = Substreams::new(seed);
    let run = |buf: &mut TrialBuffers, i: usize| {
        let mut rng = streams.stream(i as u64);
        buf.max_gain(config, &mut rng)
    };
    match execution {
        Execution::Sequential => {
            let mut buf = TrialBuffers::new(config);
            (0..trials).map(|i| run(&mut buf, i)).collect()
        }
        Execution::Parallel => (0..trials)
            .into_par_iter()
            .map_init(|| TrialBuffers::new(config), run)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub config: SystemConfig,
    pub seed: u64,
    pub trials: usize,
}

pub fn simulate_mi_samples(config: &SystemConfig, trials: usize, seed: u64) -> SampleSet {
    simulate_mi_samples_with(config, trials, seed, Execution::Parallel)
}

pub fn simulate_mi_samples_with(
    config: &SystemConfig,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> SampleSet {
    let values = simulate_max_gains(config, trials, seed, execution)
        .into_iter()
        .map(|z| mutual_information(config.rho(), z))
        .collect();
    SampleSet {
        values,
        config: *config,
        seed,
        trials,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DependencyEstimate {
    pub lag: usize,
    pub threshold: f64,
    pub estimate: f64,
    pub std_error: f64,
    /// Trials with both windows above the threshold.
    pub joint: u64,
    /// Trials with the first window above the threshold.
    pub marginal: u64,
    pub trials: u64,
    pub low_confidence: bool,
}

impl DependencyEstimate {
    fn from_counts(lag: usize, threshold: f64, joint: u64, marginal: u64, trials: u64) -> Result<Self> {
        if marginal == 0 {
            return Err(Error::InsufficientExceedances {
                joint,
                marginal,
                trials,
            });
        }
        let estimate = joint as f64 / marginal as f64;
        Ok(Self {
            lag,
            threshold,
            estimate,
            // joint exceedance is a sub-event of the marginal one, so the
            // ratio is a binomial proportion over `marginal` trials
            std_error: (estimate * (1.0 - estimate) / marginal as f64).sqrt(),
            joint,
            marginal,
            trials,
            low_confidence: marginal < MIN_EXCEEDANCES,
        })
    }
}

/// Sums `n_t` powers starting at each offset in `0..count`.
fn leading_window_sums(powers: &[f64], n_t: usize, count: usize) -> impl Iterator<Item = f64> + '_ {
    (0..count).map(move |k| powers[k..k + n_t].iter().sum())
}

/// Monte-Carlo estimate of `Pr{min(z_m, z_{m+k}) > u} / Pr{z_m > u}`.
///
/// The gains are stationary, so each trial draws only the `n_t + k`
/// apertures covered by the first window and its `k`-th successor.
pub fn estimate_dependency_measure(
    config: &SystemConfig,
    lag: usize,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<DependencyEstimate> {
    let n_t = config.n_t();
    if lag == 0 || lag >= config.n_windows() {
        return domain(format!(
            "lag must lie in [1, {}], got {lag}",
            config.n_windows().saturating_sub(1)
        ));
    }
    if !(threshold.is_finite() && threshold >= 0.0) {
        return domain(format!("threshold must be finite and nonnegative, got {threshold}"));
    }
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let streams = Substreams::new(seed);
    let (joint, marginal) = (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |powers, i| {
            let mut rng = streams.stream(i as u64);
            draw_powers(n_t + lag, &mut rng, powers);
            let first: f64 = powers[..n_t].iter().sum();
            let second: f64 = powers[lag..lag + n_t].iter().sum();
            let hit = first > threshold;
            ((hit && second > threshold) as u64, hit as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    DependencyEstimate::from_counts(lag, threshold, joint, marginal, trials as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Quantile level of the window-gain law defining the threshold.
    pub level: f64,
    pub threshold: f64,
    /// `max_{0<k<n_t}` of the dependency estimates; the plain tail
    /// probability `1 - level` when the sweep is vacuous.
    pub max_delta: Option<f64>,
    pub std_error: Option<f64>,
    pub argmax_lag: Option<usize>,
    pub marginal: u64,
    pub low_confidence: bool,
    /// No marginal exceedance was observed at this threshold.
    pub insufficient: bool,
    /// `n_t = 1`: windows never overlap.
    pub vacuous: bool,
}

/// Maximum dependency measure over the overlapping lags `1..n_t` at
/// thresholds placed on quantiles of the window-gain law.
///
/// One pass draws `n_t + k_max` apertures per trial and counts every
/// (level, lag) pair from the same draws. Levels without any marginal
/// exceedance are flagged `insufficient` rather than failing the sweep.
pub fn dependency_condition_sweep(
    config: &SystemConfig,
    levels: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let n_t = config.n_t();
    let thresholds = levels
        .iter()
        .map(|&p| chi_squared_window_quantile(p, n_t))
        .collect::<Result<Vec<_>>>()?;
    let max_lag = (n_t - 1).min(config.n_windows() - 1);
    if max_lag == 0 {
        return Ok(levels
            .iter()
            .zip(&thresholds)
            .map(|(&level, &threshold)| SweepRow {
                level,
                threshold,
                max_delta: Some(1.0 - level),
                std_error: Some(0.0),
                argmax_lag: None,
                marginal: 0,
                low_confidence: false,
                insufficient: false,
                vacuous: true,
            })
            .collect());
    }
    if trials == 0 {
        return domain("at least one trial is required");
    }

    // counts[j] = [marginal, joint(k=1), ..., joint(k=max_lag)] for level j
    let width = max_lag + 1;
    let streams = Substreams::new(seed);
    let zero = || vec![0u64; levels.len() * width];
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || (zero(), Vec::new(), Vec::new()),
            |(mut counts, mut powers, mut sums), i| {
                let mut rng = streams.stream(i as u64);
                draw_powers(n_t + max_lag, &mut rng, &mut powers);
                sums.clear();
                sums.extend(leading_window_sums(&powers, n_t, width));
                for (j, &u) in thresholds.iter().enumerate() {
                    if sums[0] > u {
                        let row = &mut counts[j * width..(j + 1) * width];
                        row[0] += 1;
                        for k in 1..width {
                            row[k] += (sums[k] > u) as u64;
                        }
                    }
                }
                (counts, powers, sums)
            },
        )
        .map(|(counts, _, _)| counts)
        .reduce(zero, |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        });

    let rows = levels
        .iter()
        .zip(&thresholds)
        .enumerate()
        .map(|(j, (&level, &threshold))| {
            let row = &counts[j * width..(j + 1) * width];
            let marginal = row[0];
            let best = (1..width)
                .filter_map(|k| {
                    DependencyEstimate::from_counts(k, threshold, row[k], marginal, trials as u64).ok()
                })
                .fold(None::<DependencyEstimate>, |best, e| match best {
                    Some(b) if b.estimate >= e.estimate => Some(b),
                    _ => Some(e),
                });
            SweepRow {
                level,
                threshold,
                max_delta: best.map(|e| e.estimate),
                std_error: best.map(|e| e.std_error),
                argmax_lag: best.map(|e| e.lag),
                marginal,
                low_confidence: marginal < MIN_EXCEEDANCES,
                insufficient: marginal == 0,
                vacuous: false,
            }
        })
        .collect();
    Ok(rows)
}
