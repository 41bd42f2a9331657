//! Brute-force waveform oracle.
//!
//! Synthesizes the modulated baseband signal and the multipath received
//! signal on an oversampled time grid and measures powers, autocorrelations,
//! error variances, and SIR by guarded time averaging. Everything here is
//! deliberately independent of the closed forms it is used to check: pulse
//! values are evaluated directly at (fractionally) shifted arguments, never
//! interpolated, and averages run over an integer number of symbol periods
//! so the cyclostationary phase is averaged out exactly.
//!
//! Delays and lags are in units of the symbol period.

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::model::FadingCoefficients;
use crate::pulse::PulseShape;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One-dimensional symbol alphabets, normalized to unit mean square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constellation {
    /// Levels {-1, +1}.
    Bpsk,
    /// Levels {+-1, +-3} / sqrt(5).
    Pam4,
}

impl Constellation {
    pub fn levels(&self) -> Vec<f64> {
        match self {
            Constellation::Bpsk => vec![-1.0, 1.0],
            Constellation::Pam4 => {
                let a = 1.0 / 5f64.sqrt();
                vec![-3.0 * a, -a, a, 3.0 * a]
            }
        }
    }

    pub fn bits_per_symbol(&self) -> u32 {
        match self {
            Constellation::Bpsk => 1,
            Constellation::Pam4 => 2,
        }
    }
}

/// Discretization parameters of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaveformConfig {
    /// Samples per symbol period.
    pub oversampling: usize,
    /// Frame length in symbols.
    pub frame_len: usize,
    /// One-sided pulse support in symbols; contributions beyond it are
    /// dropped.
    pub pulse_truncation: usize,
    /// Symbols excluded from time averages at each frame edge.
    pub edge_guard: usize,
}

impl Default for WaveformConfig {
    fn default() -> Self {
        Self {
            oversampling: 16,
            frame_len: 10_000,
            pulse_truncation: 8,
            edge_guard: 8,
        }
    }
}

impl WaveformConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oversampling < 4 {
            return Err(Error::Config(format!(
                "oversampling must be at least 4, got {}",
                self.oversampling
            )));
        }
        if self.frame_len < 100 {
            return Err(Error::Config(format!(
                "frame length must be at least 100 symbols, got {}",
                self.frame_len
            )));
        }
        if self.pulse_truncation < 4 {
            return Err(Error::Config(format!(
                "pulse truncation must be at least 4 symbols, got {}",
                self.pulse_truncation
            )));
        }
        Ok(())
    }

    pub fn with_frame_len(mut self, frame_len: usize) -> Self {
        self.frame_len = frame_len;
        self
    }

    fn num_samples(&self) -> usize {
        self.frame_len * self.oversampling
    }

    /// Sample range over which time averages run on a buffer of `n`
    /// samples, excluding `edge_guard` symbols plus enough extra to keep
    /// every shifted signal free of frame-edge truncation.
    fn guarded_range(&self, max_shift: f64, n: usize) -> std::ops::Range<usize> {
        let extra = max_shift.abs().ceil() as usize + 1;
        let guard = (self.edge_guard + extra) * self.oversampling;
        guard..n.saturating_sub(guard)
    }
}

/// A drawn amplitude sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    symbols: Vec<f64>,
    constellation: Constellation,
    seed: u64,
}

impl SymbolFrame {
    /// Draws `len` i.i.d. symbols uniformly from the constellation's level
    /// set; identical seeds produce identical frames.
    pub fn draw(constellation: Constellation, len: usize, seed: u64) -> Self {
        let levels = constellation.levels();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symbols = (0..len)
            .map(|_| levels[rng.random_range(0..levels.len())])
            .collect();
        Self {
            symbols,
            constellation,
            seed,
        }
    }

    pub fn symbols(&self) -> &[f64] {
        &self.symbols
    }

    pub fn constellation(&self) -> Constellation {
        self.constellation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Synthesizes `s(t - delay)` on the oversampled grid `t_i = i T_s / M`,
/// by direct summation of truncated pulse contributions. Fractional delays
/// are handled by evaluating the pulse at shifted arguments.
pub fn synth_baseband(
    frame: &SymbolFrame,
    pulse: &PulseShape,
    delay: f64,
    cfg: &WaveformConfig,
) -> Vec<f64> {
    debug_assert!(cfg.validate().is_ok());
    let m = cfg.oversampling;
    let n = cfg.num_samples().min(frame.symbols.len() * m);
    let trunc = cfg.pulse_truncation as f64;
    let ts = pulse.symbol_period();

    // Pulse samples at offsets (j/M - delay) symbol periods, covering the
    // truncated support; shared by every symbol.
    let j_lo = ((delay - trunc) * m as f64).ceil() as i64;
    let j_hi = ((delay + trunc) * m as f64).floor() as i64;
    let table: Vec<f64> = (j_lo..=j_hi)
        .map(|j| pulse.eval((j as f64 / m as f64 - delay) * ts))
        .collect();

    let mut out = vec![0.0; n];
    for (k, &symbol) in frame.symbols.iter().enumerate() {
        if symbol == 0.0 {
            continue;
        }
        let base = (k * m) as i64 + j_lo;
        let start = (-base).max(0) as usize;
        let stop = ((n as i64 - base).max(0) as usize).min(table.len());
        for idx in start..stop {
            out[(base + idx as i64) as usize] += symbol * table[idx];
        }
    }
    out
}

/// Synthesizes the noise-free received signal
/// `sqrt(E_s) sum_n gamma_n s(t - tau_n)` on the oversampled grid.
pub fn synth_received(
    frame: &SymbolFrame,
    real: &ChannelRealization,
    pulse: &PulseShape,
    symbol_energy: f64,
    cfg: &WaveformConfig,
) -> Vec<Complex64> {
    let amplitude = symbol_energy.sqrt();
    let mut out = vec![
        Complex64::new(0.0, 0.0);
        cfg.num_samples()
            .min(frame.symbols.len() * cfg.oversampling)
    ];
    for (gain, &delay) in real.gains().iter().zip(real.delays()) {
        let path = synth_baseband(frame, pulse, delay, cfg);
        let scale = amplitude * gain;
        for (acc, sample) in out.iter_mut().zip(path) {
            *acc += scale * sample;
        }
    }
    out
}

/// Guarded time-average estimate of the autocorrelation `R(tau)` from a
/// fresh random frame.
pub fn empirical_autocorr(
    pulse: &PulseShape,
    constellation: Constellation,
    tau: f64,
    cfg: &WaveformConfig,
    seed: u64,
) -> f64 {
    let frame = SymbolFrame::draw(constellation, cfg.frame_len, seed);
    let base = synth_baseband(&frame, pulse, 0.0, cfg);
    let shifted = synth_baseband(&frame, pulse, -tau, cfg);
    let range = cfg.guarded_range(tau, base.len());
    let len = range.len() as f64;
    range.map(|i| base[i] * shifted[i]).sum::<f64>() / len
}

/// Guarded mean power of the real synthesized signal.
pub fn mean_signal_power(samples: &[f64], cfg: &WaveformConfig) -> f64 {
    let range = cfg.guarded_range(0.0, samples.len());
    let len = range.len() as f64;
    range.map(|i| samples[i] * samples[i]).sum::<f64>() / len
}

/// Guarded mean of the real synthesized signal itself.
pub fn mean_signal(samples: &[f64], cfg: &WaveformConfig) -> f64 {
    let range = cfg.guarded_range(0.0, samples.len());
    let len = range.len() as f64;
    range.map(|i| samples[i]).sum::<f64>() / len
}

fn max_shift(real: &ChannelRealization, timing: f64) -> f64 {
    real.delays()
        .iter()
        .cloned()
        .fold(timing.abs(), |acc, d| acc.max(d.abs()))
}

/// Measured residual power: guarded time-average of
/// `|r(t) - sqrt(E_s) gain s(t - timing)|^2`. Estimates `E_s interference^2`.
pub fn empirical_error_variance(
    frame: &SymbolFrame,
    real: &ChannelRealization,
    coeffs: &FadingCoefficients,
    pulse: &PulseShape,
    symbol_energy: f64,
    cfg: &WaveformConfig,
) -> f64 {
    let received = synth_received(frame, real, pulse, symbol_energy, cfg);
    let desired = synth_baseband(frame, pulse, coeffs.timing, cfg);
    let scale = symbol_energy.sqrt() * coeffs.gain;
    let range = cfg.guarded_range(max_shift(real, coeffs.timing), received.len());
    let len = range.len() as f64;
    range
        .map(|i| (received[i] - scale * desired[i]).norm_sqr())
        .sum::<f64>()
        / len
}

/// Measured per-realization SIR: guarded desired power over guarded residual
/// power. Positive infinity when the residual vanishes.
pub fn empirical_sir(
    frame: &SymbolFrame,
    real: &ChannelRealization,
    coeffs: &FadingCoefficients,
    pulse: &PulseShape,
    symbol_energy: f64,
    cfg: &WaveformConfig,
) -> f64 {
    let received = synth_received(frame, real, pulse, symbol_energy, cfg);
    let desired = synth_baseband(frame, pulse, coeffs.timing, cfg);
    let scale = symbol_energy.sqrt() * coeffs.gain;
    let range = cfg.guarded_range(max_shift(real, coeffs.timing), received.len());
    let len = range.len() as f64;
    let mut desired_power = 0.0;
    let mut residual_power = 0.0;
    for i in range {
        let d = scale * desired[i];
        desired_power += d.norm_sqr();
        residual_power += (received[i] - d).norm_sqr();
    }
    if residual_power == 0.0 {
        return f64::INFINITY;
    }
    (desired_power / len) / (residual_power / len)
}

/// Measured cross-correlation between the desired term and the residual,
/// with per-component standard errors estimated from 64-symbol batch means.
#[derive(Debug, Clone, Copy)]
pub struct CrossTermEstimate {
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

pub fn empirical_cross_term(
    frame: &SymbolFrame,
    real: &ChannelRealization,
    coeffs: &FadingCoefficients,
    pulse: &PulseShape,
    symbol_energy: f64,
    cfg: &WaveformConfig,
) -> CrossTermEstimate {
    let received = synth_received(frame, real, pulse, symbol_energy, cfg);
    let desired = synth_baseband(frame, pulse, coeffs.timing, cfg);
    let scale = symbol_energy.sqrt() * coeffs.gain;
    let range = cfg.guarded_range(max_shift(real, coeffs.timing), received.len());

    // Batches long enough (64 symbols) to decorrelate across the pulse span.
    let batch = 64 * cfg.oversampling;
    let mut batch_means = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for i in range {
        let d = scale * desired[i];
        acc += d.conj() * (received[i] - d);
        count += 1;
        if count == batch {
            batch_means.push(acc / batch as f64);
            acc = Complex64::new(0.0, 0.0);
            count = 0;
        }
    }
    let b = batch_means.len() as f64;
    let mean = batch_means.iter().sum::<Complex64>() / b;
    let var_re = batch_means
        .iter()
        .map(|z| (z.re - mean.re).powi(2))
        .sum::<f64>()
        / (b - 1.0);
    let var_im = batch_means
        .iter()
        .map(|z| (z.im - mean.im).powi(2))
        .sum::<f64>()
        / (b - 1.0);
    CrossTermEstimate {
        mean,
        stderr_re: (var_re / b).sqrt(),
        stderr_im: (var_im / b).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{trial_rng, AmplitudeProfile, ChannelConfig};
    use crate::model;

    fn pulse() -> PulseShape {
        PulseShape::normalized(0.8).unwrap()
    }

    fn small_cfg(frame_len: usize) -> WaveformConfig {
        WaveformConfig::default().with_frame_len(frame_len)
    }

    #[test]
    fn frames_are_deterministic_and_on_levels() {
        let a = SymbolFrame::draw(Constellation::Bpsk, 1000, 5);
        let b = SymbolFrame::draw(Constellation::Bpsk, 1000, 5);
        assert_eq!(a, b);
        assert!(a.symbols().iter().all(|&s| s == 1.0 || s == -1.0));
        let c = SymbolFrame::draw(Constellation::Bpsk, 1000, 6);
        assert_ne!(a, c);
    }

    #[test]
    fn bpsk_symbols_have_unit_square() {
        let frame = SymbolFrame::draw(Constellation::Bpsk, 10_000, 1);
        for &s in frame.symbols() {
            assert_eq!(s * s, 1.0);
        }
        let mean = frame.symbols().iter().sum::<f64>() / frame.symbols().len() as f64;
        assert!(mean.abs() < 0.05);
    }

    #[test]
    fn pam4_mean_square_approaches_one() {
        let frame = SymbolFrame::draw(Constellation::Pam4, 1_000_000, 2);
        let mean_sq =
            frame.symbols().iter().map(|s| s * s).sum::<f64>() / frame.symbols().len() as f64;
        assert!((mean_sq - 1.0).abs() < 0.005, "mean square {mean_sq}");
        let levels = Constellation::Pam4.levels();
        let alphabet_mean_sq = levels.iter().map(|l| l * l).sum::<f64>() / levels.len() as f64;
        assert!((alphabet_mean_sq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_symbol_reproduces_pulse() {
        let p = pulse();
        let cfg = WaveformConfig {
            frame_len: 100,
            ..WaveformConfig::default()
        };
        let mut frame = SymbolFrame::draw(Constellation::Bpsk, 100, 0);
        for s in frame.symbols.iter_mut() {
            *s = 0.0;
        }
        frame.symbols[50] = 1.0;
        let samples = synth_baseband(&frame, &p, 0.0, &cfg);
        let m = cfg.oversampling;
        for (i, &sample) in samples.iter().enumerate() {
            let t = i as f64 / m as f64 - 50.0;
            let expected = if t.abs() <= cfg.pulse_truncation as f64 {
                p.eval(t)
            } else {
                0.0
            };
            assert!(
                (sample - expected).abs() < 1e-15,
                "sample {i} is {sample} expected {expected}"
            );
        }
    }

    #[test]
    fn integer_delay_shifts_by_whole_samples() {
        let p = pulse();
        let cfg = small_cfg(400);
        let frame = SymbolFrame::draw(Constellation::Bpsk, 400, 9);
        let base = synth_baseband(&frame, &p, 0.0, &cfg);
        let delayed = synth_baseband(&frame, &p, 1.0, &cfg);
        let m = cfg.oversampling;
        for i in (m + 200)..(base.len() - 200) {
            assert!(
                (delayed[i] - base[i - m]).abs() < 1e-12,
                "delayed sample {i} mismatch"
            );
        }
    }

    #[test]
    fn mean_power_matches_pulse_identity() {
        // E{|s|^2} = 1 - beta/4 for each constellation and roll-off.
        for beta in [0.25, 0.5, 0.8] {
            let p = PulseShape::normalized(beta).unwrap();
            for (constellation, seed) in [(Constellation::Bpsk, 3), (Constellation::Pam4, 4)] {
                let cfg = small_cfg(20_000);
                let frame = SymbolFrame::draw(constellation, cfg.frame_len, seed);
                let samples = synth_baseband(&frame, &p, 0.0, &cfg);
                let power = mean_signal_power(&samples, &cfg);
                let expected = 1.0 - beta / 4.0;
                assert!(
                    (power - expected).abs() < 0.01 * expected,
                    "power {power} vs {expected} for beta {beta}"
                );
            }
        }
    }

    #[test]
    fn signal_mean_is_zero() {
        let p = pulse();
        let cfg = small_cfg(20_000);
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 11);
        let samples = synth_baseband(&frame, &p, 0.0, &cfg);
        let mean = mean_signal(&samples, &cfg);
        // Standard error of the mean, batched per symbol.
        let stderr = (mean_signal_power(&samples, &cfg) / cfg.frame_len as f64).sqrt();
        assert!(mean.abs() < 3.0 * stderr, "mean {mean} stderr {stderr}");
    }

    #[test]
    fn empirical_autocorr_matches_closed_form() {
        let p = pulse();
        let cfg = small_cfg(100_000);
        for (tau, seed) in [(0.0, 21), (0.5, 22), (3.0, 23), (-1.3, 24)] {
            let measured = empirical_autocorr(&p, Constellation::Bpsk, tau, &cfg, seed);
            let closed = p.autocorr(tau);
            assert!(
                (measured - closed).abs() < 1e-2,
                "autocorr at {tau}: {measured} vs {closed}"
            );
        }
    }

    #[test]
    fn empirical_autocorr_decays_at_large_lag() {
        let p = pulse();
        let cfg = small_cfg(30_000);
        let v = empirical_autocorr(&p, Constellation::Bpsk, 9.0, &cfg, 31);
        assert!(v.abs() < 1e-2, "autocorr at 9 symbol periods is {v}");
    }

    #[test]
    fn received_single_path_is_scaled_baseband() {
        let p = pulse();
        let cfg = small_cfg(500);
        let frame = SymbolFrame::draw(Constellation::Bpsk, 500, 13);
        let config = ChannelConfig::new(1, 0.0, AmplitudeProfile::Uniform, 0).unwrap();
        let real =
            ChannelRealization::from_parts(vec![Complex64::new(1.0, 0.0)], vec![0.0], config)
                .unwrap();
        let e_s = 4.0;
        let received = synth_received(&frame, &real, &p, e_s, &cfg);
        let base = synth_baseband(&frame, &p, 0.0, &cfg);
        for (r, s) in received.iter().zip(base) {
            assert!((r - Complex64::new(2.0 * s, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn opposite_gains_cancel() {
        let p = pulse();
        let cfg = small_cfg(300);
        let frame = SymbolFrame::draw(Constellation::Bpsk, 300, 17);
        let a = 1.0 / 2f64.sqrt();
        let config = ChannelConfig::new(2, 0.0, AmplitudeProfile::Uniform, 0).unwrap();
        let real = ChannelRealization::from_parts(
            vec![Complex64::new(a, 0.0), Complex64::new(-a, 0.0)],
            vec![0.0, 0.0],
            config,
        )
        .unwrap();
        let received = synth_received(&frame, &real, &p, 1.0, &cfg);
        assert!(received.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn zero_spread_is_narrowband_identity() {
        let p = pulse();
        let cfg = small_cfg(300);
        let frame = SymbolFrame::draw(Constellation::Bpsk, 300, 19);
        let config = ChannelConfig::new(4, 0.0, AmplitudeProfile::Uniform, 23).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(23, 0));
        let received = synth_received(&frame, &real, &p, 1.0, &cfg);
        let base = synth_baseband(&frame, &p, 0.0, &cfg);
        let total: Complex64 = real.gains().iter().sum();
        for (r, s) in received.iter().zip(base) {
            assert!((r - total * s).norm() < 1e-12);
        }
    }

    #[test]
    fn perfect_sync_has_no_residual() {
        let p = pulse();
        let cfg = small_cfg(300);
        let frame = SymbolFrame::draw(Constellation::Bpsk, 300, 29);
        let gain = Complex64::from_polar(1.0, -1.1);
        let config = ChannelConfig::new(1, 0.0, AmplitudeProfile::Uniform, 0).unwrap();
        let real = ChannelRealization::from_parts(vec![gain], vec![0.0], config).unwrap();
        let coeffs = FadingCoefficients {
            gain,
            interference: 0.0,
            timing: 0.0,
        };
        let residual = empirical_error_variance(&frame, &real, &coeffs, &p, 1.0, &cfg);
        assert!(residual < 1e-25, "residual power {residual}");
        assert!(empirical_sir(&frame, &real, &coeffs, &p, 1.0, &cfg).is_infinite());
    }

    #[test]
    fn residual_power_matches_closed_form() {
        let p = pulse();
        let cfg = small_cfg(100_000);
        let e_s = 1.9;
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 71).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(71, 0));
        let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 72);
        let measured = empirical_error_variance(&frame, &real, &coeffs, &p, e_s, &cfg);
        let expected = e_s * coeffs.interference * coeffs.interference;
        assert!(
            (measured - expected).abs() < 0.02 * expected,
            "residual {measured} vs closed form {expected}"
        );
    }

    #[test]
    fn perturbed_gain_increases_residual() {
        let p = pulse();
        let cfg = small_cfg(20_000);
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 73).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(73, 0));
        let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 74);
        let at_optimum = empirical_error_variance(&frame, &real, &coeffs, &p, 1.0, &cfg);
        let perturbed = FadingCoefficients {
            gain: coeffs.gain * 1.1,
            ..coeffs
        };
        let away = empirical_error_variance(&frame, &real, &perturbed, &p, 1.0, &cfg);
        assert!(away > at_optimum, "{away} should exceed {at_optimum}");
    }

    #[test]
    fn fitted_gain_matches_closed_form() {
        // Least-squares regression of r(t) on sqrt(E_s) s(t - timing) is an
        // independent estimate of the optimal coefficient.
        let p = pulse();
        let cfg = small_cfg(300_000);
        let e_s = 1.0;
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 83).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(83, 0));
        let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 84);
        let received = synth_received(&frame, &real, &p, e_s, &cfg);
        let desired = synth_baseband(&frame, &p, coeffs.timing, &cfg);
        let range = cfg.guarded_range(1.0, received.len());
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for i in range {
            num += received[i] * desired[i];
            den += desired[i] * desired[i];
        }
        let fitted = num / (e_s.sqrt() * den);
        assert!(
            (fitted - coeffs.gain).norm() < 1e-3 * coeffs.gain.norm(),
            "fitted {fitted} vs closed form {}",
            coeffs.gain
        );
    }

    #[test]
    fn cross_term_is_statistically_zero() {
        let p = pulse();
        let cfg = small_cfg(50_000);
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 91).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(91, 0));
        let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 92);
        let est = empirical_cross_term(&frame, &real, &coeffs, &p, 1.0, &cfg);
        assert!(
            est.mean.re.abs() < 3.0 * est.stderr_re,
            "re {} stderr {}",
            est.mean.re,
            est.stderr_re
        );
        assert!(
            est.mean.im.abs() < 3.0 * est.stderr_im,
            "im {} stderr {}",
            est.mean.im,
            est.stderr_im
        );
    }

    #[test]
    fn discretization_is_converged() {
        // Doubling the oversampling or the truncation moves the measured
        // SIR by well under 0.05 dB.
        let p = pulse();
        let base_cfg = small_cfg(20_000);
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 95).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(95, 0));
        let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, base_cfg.frame_len, 96);
        let reference = empirical_sir(&frame, &real, &coeffs, &p, 1.0, &base_cfg);
        let denser = WaveformConfig {
            oversampling: 32,
            ..base_cfg
        };
        let longer = WaveformConfig {
            pulse_truncation: 16,
            edge_guard: 16,
            ..base_cfg
        };
        for cfg in [denser, longer] {
            let other = empirical_sir(&frame, &real, &coeffs, &p, 1.0, &cfg);
            let delta_db = 10.0 * (other / reference).log10().abs();
            assert!(delta_db < 0.05, "SIR moved by {delta_db} dB");
        }
    }

    #[test]
    fn sir_matches_closed_form_within_tolerance() {
        let p = pulse();
        let cfg = small_cfg(100_000);
        let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, 99).unwrap();
        for stream in 0..3 {
            let real = ChannelRealization::sample(&config, &mut trial_rng(99, stream));
            let coeffs = crate::timing::search_timing(&real, &p, &Default::default()).unwrap();
            let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 100 + stream);
            let measured = empirical_sir(&frame, &real, &coeffs, &p, 1.0, &cfg);
            let closed = coeffs.sir(&p);
            let delta_db = 10.0 * (measured / closed).log10().abs();
            assert!(delta_db < 0.2, "SIR differs by {delta_db} dB");
        }
    }

    #[test]
    fn validates_discretization_bounds() {
        let bad = WaveformConfig {
            oversampling: 2,
            ..WaveformConfig::default()
        };
        assert!(bad.validate().is_err());
        let short = WaveformConfig {
            frame_len: 10,
            ..WaveformConfig::default()
        };
        assert!(short.validate().is_err());
        let narrow = WaveformConfig {
            pulse_truncation: 2,
            ..WaveformConfig::default()
        };
        assert!(narrow.validate().is_err());
        assert!(WaveformConfig::default().validate().is_ok());
    }

    #[test]
    fn model_gain_matches_oracle_in_narrowband_regime() {
        let p = pulse();
        let cfg = small_cfg(20_000);
        let config = ChannelConfig::new(4, 1e-4, AmplitudeProfile::Uniform, 111).unwrap();
        let real = ChannelRealization::sample(&config, &mut trial_rng(111, 0));
        let coeffs = model::characterize(&real, 0.0, &p).unwrap();
        let total: Complex64 = real.gains().iter().sum();
        assert!((coeffs.gain - total).norm() < 1e-4);
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, 112);
        let residual = empirical_error_variance(&frame, &real, &coeffs, &p, 1.0, &cfg);
        assert!(residual < 1e-5, "near-narrowband residual {residual}");
    }
}
