//! Closed-form mediumband channel characterization.
//!
//! For a fixed realization and a synchronization instant `tau_hat`, the
//! received signal decomposes into a desired term `sqrt(E_s) h s(t - tau_hat)`
//! plus a residual. The coefficient minimizing the residual power is
//!
//! `h = sum_n gamma_n R(tau_n - tau_hat) / (1 - beta/4)`,
//!
//! and the minimized residual power is `E_s eta^2` with
//!
//! `eta^2 = (1 - beta/4) [sum |gamma_n|^2 - |h|^2]
//!        + sum_n sum_{m != n} gamma_n conj(gamma_m) R(tau_n - tau_m)`.
//!
//! This module computes those coefficients, the residual-power functional
//! for arbitrary trial coefficients together with its gradient, the
//! cross-correlation between desired and residual terms, and SINR.

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::pulse::PulseShape;
use num_complex::Complex64;

/// Radicand values at or above this (negative) floor are treated as
/// floating-point noise around zero and clamped; anything lower signals an
/// inconsistent autocorrelation or a non-optimal coefficient.
const RADICAND_FLOOR: f64 = -1e-9;

/// Radicand magnitudes below this are cancellation noise from degenerate
/// channels (all delays equal, single path) and collapse to exactly zero,
/// so the interference coefficient vanishes where it analytically must.
const RADICAND_DEAD_BAND: f64 = 1e-12;

/// The per-realization channel summary: desired-signal coefficient,
/// interfering-signal coefficient, and the synchronization instant (in
/// symbol periods) they correspond to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingCoefficients {
    /// Complex fading coefficient multiplying the desired signal.
    pub gain: Complex64,
    /// Nonnegative amplitude of the residual interference process.
    pub interference: f64,
    /// Synchronization instant, units of the symbol period.
    pub timing: f64,
}

impl FadingCoefficients {
    /// Noise-free per-realization signal-to-interference ratio,
    /// `|gain|^2 (1 - beta/4) / interference^2`. Positive infinity when the
    /// interference coefficient is zero.
    pub fn sir(&self, pulse: &PulseShape) -> f64 {
        let desired = self.gain.norm_sqr() * pulse.peak_autocorr();
        let residual = self.interference * self.interference;
        if residual == 0.0 {
            f64::INFINITY
        } else {
            desired / residual
        }
    }
}

/// Linear power scales of the link: symbol energy and noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    symbol_energy: f64,
    noise_variance: f64,
}

impl LinkBudget {
    pub fn new(symbol_energy: f64, noise_variance: f64) -> Result<Self> {
        if !symbol_energy.is_finite() || symbol_energy <= 0.0 {
            return Err(Error::Config(format!(
                "symbol energy must be positive, got {symbol_energy}"
            )));
        }
        if !noise_variance.is_finite() || noise_variance < 0.0 {
            return Err(Error::Config(format!(
                "noise variance must be nonnegative, got {noise_variance}"
            )));
        }
        Ok(Self {
            symbol_energy,
            noise_variance,
        })
    }

    /// Noise-free link with the given symbol energy.
    pub fn noiseless(symbol_energy: f64) -> Result<Self> {
        Self::new(symbol_energy, 0.0)
    }

    pub fn symbol_energy(&self) -> f64 {
        self.symbol_energy
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }
}

/// `sum_n gamma_n R(tau_n - timing)`: the correlation of the received signal
/// with the desired signal, before normalization.
fn gain_numerator(real: &ChannelRealization, timing: f64, pulse: &PulseShape) -> Complex64 {
    let ts = pulse.symbol_period();
    real.gains()
        .iter()
        .zip(real.delays())
        .map(|(g, &d)| g * pulse.autocorr((d - timing) * ts))
        .sum()
}

/// Optimal desired-signal coefficient for the given synchronization instant.
pub fn desired_gain(real: &ChannelRealization, timing: f64, pulse: &PulseShape) -> Complex64 {
    gain_numerator(real, timing, pulse) / pulse.peak_autocorr()
}

/// The pairwise coupling `sum_n sum_{m != n} gamma_n conj(gamma_m)
/// R(tau_n - tau_m)`. Real because the terms pair conjugately; independent
/// of the synchronization instant.
pub fn interference_cross_term(real: &ChannelRealization, pulse: &PulseShape) -> f64 {
    let ts = pulse.symbol_period();
    let gains = real.gains();
    let delays = real.delays();
    let mut acc = 0.0;
    for n in 0..gains.len() {
        for m in (n + 1)..gains.len() {
            let coupling = (gains[n] * gains[m].conj()).re;
            acc += 2.0 * coupling * pulse.autocorr((delays[n] - delays[m]) * ts);
        }
    }
    acc
}

/// Interfering-signal coefficient at the optimal desired gain.
///
/// `gain` must be the optimal coefficient for the chosen timing (use
/// [`error_variance`] to probe arbitrary trial coefficients). The radicand
/// is analytically nonnegative; magnitudes below the dead band collapse to
/// zero, values down to `-1e-9` are clamped as floating-point noise, and
/// anything lower is reported as an error.
pub fn interference_gain(
    real: &ChannelRealization,
    gain: Complex64,
    pulse: &PulseShape,
) -> Result<f64> {
    let radicand = pulse.peak_autocorr() * (real.power() - gain.norm_sqr())
        + interference_cross_term(real, pulse);
    if radicand < RADICAND_FLOOR {
        return Err(Error::Numerical(format!(
            "interference power radicand {radicand} is far below zero; \
             autocorrelation or gain inputs are inconsistent"
        )));
    }
    if radicand < RADICAND_DEAD_BAND {
        return Ok(0.0);
    }
    Ok(radicand.sqrt())
}

/// Convenience: both coefficients at the given synchronization instant.
pub fn characterize(
    real: &ChannelRealization,
    timing: f64,
    pulse: &PulseShape,
) -> Result<FadingCoefficients> {
    let gain = desired_gain(real, timing, pulse);
    let interference = interference_gain(real, gain, pulse)?;
    Ok(FadingCoefficients {
        gain,
        interference,
        timing,
    })
}

/// Residual power `J(h) = E{|r(t) - sqrt(E_s) h s(t - timing)|^2}` for an
/// arbitrary trial coefficient `h`:
///
/// `J = E_s [ (1 - beta/4)(|h|^2 + sum |gamma_n|^2)
///          + sum_{n != m} gamma_n conj(gamma_m) R(tau_n - tau_m)
///          - 2 sum_n Re{conj(gamma_n) h} R(tau_n - timing) ]`.
///
/// At the optimal coefficient this equals `E_s eta^2`.
pub fn error_variance(
    real: &ChannelRealization,
    trial_gain: Complex64,
    timing: f64,
    pulse: &PulseShape,
    symbol_energy: f64,
) -> f64 {
    let ts = pulse.symbol_period();
    let peak = pulse.peak_autocorr();
    let quadratic = peak * (trial_gain.norm_sqr() + real.power());
    let coupling = interference_cross_term(real, pulse);
    let mut alignment = 0.0;
    for (g, &d) in real.gains().iter().zip(real.delays()) {
        alignment += 2.0 * (g.conj() * trial_gain).re * pulse.autocorr((d - timing) * ts);
    }
    symbol_energy * (quadratic + coupling - alignment)
}

/// Gradient of [`error_variance`] with respect to the real and imaginary
/// parts of the trial coefficient, packed as a complex number
/// `dJ/dh_re + j dJ/dh_im`. Zero exactly at the optimal coefficient.
pub fn error_variance_gradient(
    real: &ChannelRealization,
    trial_gain: Complex64,
    timing: f64,
    pulse: &PulseShape,
    symbol_energy: f64,
) -> Complex64 {
    let correlation = gain_numerator(real, timing, pulse);
    let peak = pulse.peak_autocorr();
    2.0 * symbol_energy * (peak * trial_gain - correlation)
}

/// Cross-correlation between the desired term and the residual for a trial
/// coefficient `h`:
///
/// `L = E_s [ conj(h) sum_n gamma_n R(tau_n - timing) - |h|^2 (1 - beta/4) ]`.
///
/// Vanishes when `h` is the optimal coefficient.
pub fn cross_correlation(
    real: &ChannelRealization,
    trial_gain: Complex64,
    timing: f64,
    pulse: &PulseShape,
    symbol_energy: f64,
) -> Complex64 {
    let correlation = gain_numerator(real, timing, pulse);
    symbol_energy
        * (trial_gain.conj() * correlation
            - Complex64::new(trial_gain.norm_sqr() * pulse.peak_autocorr(), 0.0))
}

/// Signal-to-interference-plus-noise ratio,
/// `E_s |gain|^2 (1 - beta/4) / (E_s interference^2 + sigma^2)`.
/// Positive infinity when the denominator is zero.
pub fn sinr(coeffs: &FadingCoefficients, budget: &LinkBudget, pulse: &PulseShape) -> f64 {
    let desired = budget.symbol_energy() * coeffs.gain.norm_sqr() * pulse.peak_autocorr();
    let residual = budget.symbol_energy() * coeffs.interference * coeffs.interference
        + budget.noise_variance();
    if residual == 0.0 {
        f64::INFINITY
    } else {
        desired / residual
    }
}

/// Linear noise power from a spectral density in dBm/Hz and a noise
/// bandwidth in Hz: `10^(n0/10) * bandwidth`, in mW.
pub fn noise_variance_from_spectral_density(
    n0_dbm_per_hz: f64,
    noise_bandwidth_hz: f64,
) -> Result<f64> {
    if !noise_bandwidth_hz.is_finite() || noise_bandwidth_hz <= 0.0 {
        return Err(Error::Config(format!(
            "noise bandwidth must be positive, got {noise_bandwidth_hz}"
        )));
    }
    Ok(10f64.powf(n0_dbm_per_hz / 10.0) * noise_bandwidth_hz)
}
