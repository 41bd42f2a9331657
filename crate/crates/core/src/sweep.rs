//! Monte-Carlo sweeps of SIR against delay spread and path count.
//!
//! Each sweep point accumulates, over independent channel realizations, the
//! desired power `E_s |gain|^2 (1 - beta/4)` and the interference power
//! `E_s interference^2`; the reported SIR is the ratio of the two averages
//! (not the average of per-realization ratios, which diverges whenever a
//! near-narrowband draw occurs). Trials derive independent child RNG streams
//! from the master seed and the trial index, and accumulation runs in trial
//! order, so results are identical regardless of how many workers run the
//! trials.

use crate::channel::{trial_rng, AmplitudeProfile, ChannelConfig, ChannelRealization};
use crate::error::{Error, Result};
use crate::pulse::PulseShape;
use crate::timing::{search_timing, TimingSearchConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Trials dispatched between convergence checks.
const TRIAL_BATCH: usize = 64;
/// Earliest trial count at which early stopping may trigger.
const MIN_TRIALS_BEFORE_STOP: usize = 200;

/// Full description of a sweep run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Pulse roll-off factor.
    pub beta: f64,
    /// Path counts; a single entry for delay-spread sweeps, the swept list
    /// for path-count sweeps.
    pub n_paths: Vec<usize>,
    /// Percentage delay spreads; the swept list for delay-spread sweeps, a
    /// single entry for path-count sweeps.
    pub delay_spread_percents: Vec<f64>,
    /// Path amplitude profile.
    pub profile: AmplitudeProfile,
    /// Cap on fading realizations per sweep point.
    pub trials: usize,
    /// Early-stopping threshold: relative change of both running means over
    /// the trailing 10% of trials.
    pub convergence_rel_tol: f64,
    /// Master seed; every trial stream derives from it.
    pub master_seed: u64,
    /// Synchronization search parameters.
    pub timing: TimingSearchConfig,
    /// Symbol energy (cancels out of noise-free SIR).
    pub symbol_energy: f64,
    /// Noise variance; zero reproduces the noise-free SIR.
    pub noise_variance: f64,
    /// Worker-thread cap; `None` uses the global thread pool.
    pub workers: Option<usize>,
}

impl SweepConfig {
    /// Defaults matching the reference experiments: N = 5, 60% spread,
    /// uniform profile, 2000-trial cap.
    pub fn new(beta: f64) -> Self {
        Self {
            beta,
            n_paths: vec![5],
            delay_spread_percents: vec![60.0],
            profile: AmplitudeProfile::Uniform,
            trials: 2000,
            convergence_rel_tol: 1e-3,
            master_seed: 0,
            timing: TimingSearchConfig::default(),
            symbol_energy: 1.0,
            noise_variance: 0.0,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        PulseShape::normalized(self.beta)?;
        if self.n_paths.is_empty() || self.n_paths.contains(&0) {
            return Err(Error::Config(
                "path counts must be nonempty and positive".into(),
            ));
        }
        if self.delay_spread_percents.is_empty()
            || self
                .delay_spread_percents
                .iter()
                .any(|&p| !(p > 0.0 && p <= 100.0))
        {
            return Err(Error::Config(
                "delay-spread percents must lie in (0, 100]".into(),
            ));
        }
        if self.trials < 100 {
            return Err(Error::Config(format!(
                "trial cap must be at least 100, got {}",
                self.trials
            )));
        }
        if !self.convergence_rel_tol.is_finite() || self.convergence_rel_tol <= 0.0 {
            return Err(Error::Config(format!(
                "convergence tolerance must be positive, got {}",
                self.convergence_rel_tol
            )));
        }
        if !self.symbol_energy.is_finite() || self.symbol_energy <= 0.0 {
            return Err(Error::Config(format!(
                "symbol energy must be positive, got {}",
                self.symbol_energy
            )));
        }
        if self.noise_variance < 0.0 {
            return Err(Error::Config(format!(
                "noise variance must be nonnegative, got {}",
                self.noise_variance
            )));
        }
        Ok(())
    }
}

/// Aggregates for one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Configured percent delay spread or path count for this point.
    pub label: f64,
    /// SIR in dB computed from the two stored means (infinite when the
    /// interference mean vanishes; serialized as null in JSON).
    pub sir_db: f64,
    /// Whether `sir_db` is the infinity sentinel.
    pub sir_infinite: bool,
    /// Mean desired power `E_s |gain|^2 (1 - beta/4)` over trials.
    pub mean_desired: f64,
    /// Mean interference power `E_s interference^2` over trials.
    pub mean_interference: f64,
    /// Trials actually run.
    pub trials: usize,
    /// Standard error of the desired-power mean.
    pub stderr_desired: f64,
    /// Standard error of the interference-power mean.
    pub stderr_interference: f64,
    /// Mean realized delay spread of the sampled channels.
    pub realized_delay_spread_mean: f64,
    /// Whether the early-stopping criterion was met before the trial cap.
    pub converged: bool,
}

/// Ratio-of-averages SIR in dB: `10 log10(mean(desired) / mean(interference))`.
/// Infinite when the interference mean is zero.
pub fn aggregate_sir(desired: &[f64], interference: &[f64]) -> Result<f64> {
    if desired.is_empty() || desired.len() != interference.len() {
        return Err(Error::Config(format!(
            "power lists must be nonempty and equal length, got {} and {}",
            desired.len(),
            interference.len()
        )));
    }
    let mean_desired = desired.iter().sum::<f64>() / desired.len() as f64;
    let mean_interference = interference.iter().sum::<f64>() / interference.len() as f64;
    if mean_interference == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (mean_desired / mean_interference).log10())
}

/// SIR against percentage delay spread at a fixed path count.
pub fn run_delay_spread_sweep(cfg: &SweepConfig) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    if cfg.n_paths.len() != 1 {
        return Err(Error::Config(
            "delay-spread sweeps need exactly one path count".into(),
        ));
    }
    let n = cfg.n_paths[0];
    let points: Vec<(f64, usize, f64)> = cfg
        .delay_spread_percents
        .iter()
        .map(|&p| (p, n, p / 100.0))
        .collect();
    run_points(cfg, &points)
}

/// SIR against path count at a fixed percentage delay spread.
pub fn run_n_sweep(cfg: &SweepConfig) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    if cfg.delay_spread_percents.len() != 1 {
        return Err(Error::Config(
            "path-count sweeps need exactly one delay-spread percent".into(),
        ));
    }
    let t_m = cfg.delay_spread_percents[0] / 100.0;
    let points: Vec<(f64, usize, f64)> = cfg.n_paths.iter().map(|&n| (n as f64, n, t_m)).collect();
    run_points(cfg, &points)
}

fn run_points(cfg: &SweepConfig, points: &[(f64, usize, f64)]) -> Result<Vec<SweepResult>> {
    match cfg.workers {
        None => points
            .iter()
            .enumerate()
            .map(|(idx, &(label, n, t_m))| run_point(cfg, idx, label, n, t_m))
            .collect(),
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            pool.install(|| {
                points
                    .iter()
                    .enumerate()
                    .map(|(idx, &(label, n, t_m))| run_point(cfg, idx, label, n, t_m))
                    .collect()
            })
        }
    }
}

struct TrialOutcome {
    desired: f64,
    interference: f64,
    realized_spread: f64,
}

fn run_trial(
    cfg: &SweepConfig,
    pulse: &PulseShape,
    channel: &ChannelConfig,
    timing: &TimingSearchConfig,
    point_idx: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.master_seed, ((point_idx as u64) << 40) | trial as u64);
    let real = ChannelRealization::sample(channel, &mut rng);
    let coeffs = search_timing(&real, pulse, timing)?;
    let scale = cfg.symbol_energy;
    Ok(TrialOutcome {
        desired: scale * coeffs.gain.norm_sqr() * pulse.peak_autocorr(),
        interference: scale * coeffs.interference * coeffs.interference,
        realized_spread: real.realized_delay_spread(),
    })
}

/// Relative change between a running mean and its value 10% of trials ago.
fn relative_change(current: f64, earlier: f64) -> f64 {
    let scale = current.abs().max(earlier.abs());
    if scale == 0.0 {
        0.0
    } else {
        (current - earlier).abs() / scale
    }
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn stderr_of(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = mean_of(values);
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

fn run_point(
    cfg: &SweepConfig,
    point_idx: usize,
    label: f64,
    n: usize,
    t_m: f64,
) -> Result<SweepResult> {
    let pulse = PulseShape::normalized(cfg.beta)?;
    let channel = ChannelConfig::new(n, t_m, cfg.profile, cfg.master_seed)?;
    let timing = TimingSearchConfig {
        search_hi: Some(cfg.timing.search_hi.unwrap_or(t_m)),
        ..cfg.timing
    };

    let mut desired = Vec::with_capacity(cfg.trials);
    let mut interference = Vec::with_capacity(cfg.trials);
    let mut spreads = Vec::with_capacity(cfg.trials);
    let mut converged = false;

    while desired.len() < cfg.trials {
        let start = desired.len();
        let count = TRIAL_BATCH.min(cfg.trials - start);
        let outcomes: Vec<TrialOutcome> = (start..start + count)
            .into_par_iter()
            .map(|trial| run_trial(cfg, &pulse, &channel, &timing, point_idx, trial))
            .collect::<Result<Vec<_>>>()?;
        for outcome in outcomes {
            desired.push(outcome.desired);
            interference.push(outcome.interference);
            spreads.push(outcome.realized_spread);
        }

        let done = desired.len();
        if done >= MIN_TRIALS_BEFORE_STOP {
            let earlier = done - done / 10;
            let d_change = relative_change(mean_of(&desired), mean_of(&desired[..earlier]));
            let i_change =
                relative_change(mean_of(&interference), mean_of(&interference[..earlier]));
            if d_change < cfg.convergence_rel_tol && i_change < cfg.convergence_rel_tol {
                converged = true;
                break;
            }
        }
    }

    let mean_desired = mean_of(&desired);
    let mean_interference = mean_of(&interference);
    let denominator = mean_interference + cfg.noise_variance;
    let (sir_db, sir_infinite) = if denominator == 0.0 {
        (f64::INFINITY, true)
    } else {
        (10.0 * (mean_desired / denominator).log10(), false)
    };
    Ok(SweepResult {
        label,
        sir_db,
        sir_infinite,
        mean_desired,
        mean_interference,
        trials: desired.len(),
        stderr_desired: stderr_of(&desired),
        stderr_interference: stderr_of(&interference),
        realized_delay_spread_mean: mean_of(&spreads),
        converged,
    })
}
