//! Self-check battery behind the CLI `validate` subcommand.
//!
//! Runs scaled-down versions of the oracle-equivalence and invariant checks
//! and reports one pass/fail row per check. Every check is seeded, so two
//! runs with the same seed produce identical reports.

use crate::channel::{trial_rng, AmplitudeProfile, ChannelConfig, ChannelRealization};
use crate::model;
use crate::oracle::{self, Constellation, SymbolFrame, WaveformConfig};
use crate::pulse::{sinc, PulseShape};
use crate::timing::{search_timing, TimingSearchConfig};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

fn beta_grid() -> [f64; 5] {
    [0.0, 0.25, 0.5, 0.8, 1.0]
}

fn check_autocorr_peak() -> CheckResult {
    let mut worst = 0.0_f64;
    for beta in beta_grid() {
        let pulse = PulseShape::normalized(beta).unwrap();
        worst = worst.max((pulse.autocorr(0.0) - (1.0 - 0.25 * beta)).abs());
    }
    CheckResult::new(
        "autocorr-peak",
        worst < 1e-12,
        format!("max |R(0) - (1 - beta/4)| = {worst:.3e}"),
    )
}

fn check_pulse_nyquist() -> CheckResult {
    let mut worst = 0.0_f64;
    for beta in beta_grid() {
        let pulse = PulseShape::normalized(beta).unwrap();
        for k in 1..=10 {
            worst = worst.max(pulse.eval(k as f64).abs());
            worst = worst.max(pulse.eval(-(k as f64)).abs());
        }
    }
    CheckResult::new(
        "pulse-nyquist-zeros",
        worst < 1e-12,
        format!("max |g(k T)| = {worst:.3e}"),
    )
}

fn check_singularity_limits() -> CheckResult {
    let mut worst = 0.0_f64;
    for beta in [0.25, 0.5, 0.8, 1.0] {
        let pulse = PulseShape::normalized(beta).unwrap();
        let s1 = 1.0 / (2.0 * beta);
        let s2 = 1.0 / beta;
        let limit1 = 0.25 * PI * sinc(s1) - (2.0 * beta / (3.0 * PI)) * (PI * s1).cos();
        let limit2 = sinc(s2) / 3.0 - 0.125 * beta * (PI * s2).cos();
        worst = worst.max((pulse.autocorr(s1) - limit1).abs());
        worst = worst.max((pulse.autocorr(s2) - limit2).abs());
    }
    CheckResult::new(
        "autocorr-singular-limits",
        worst < 1e-8,
        format!("max |R - limit| at singular points = {worst:.3e}"),
    )
}

fn check_autocorr_shape() -> CheckResult {
    let mut even_worst = 0.0_f64;
    let mut bound_worst = f64::NEG_INFINITY;
    for beta in beta_grid() {
        let pulse = PulseShape::normalized(beta).unwrap();
        let peak = pulse.autocorr(0.0);
        for i in 0..=2000 {
            let tau = -10.0 + i as f64 * 0.01;
            even_worst = even_worst.max((pulse.autocorr(tau) - pulse.autocorr(-tau)).abs());
            bound_worst = bound_worst.max(pulse.autocorr(tau).abs() - peak);
        }
    }
    CheckResult::new(
        "autocorr-even-and-bounded",
        even_worst == 0.0 && bound_worst <= 1e-12,
        format!("evenness residual {even_worst:.3e}, peak excess {bound_worst:.3e}"),
    )
}

fn check_power_identity(seed: u64) -> CheckResult {
    let cfg = WaveformConfig::default().with_frame_len(20_000);
    let mut worst = 0.0_f64;
    for (i, beta) in [0.25, 0.5, 0.8].iter().enumerate() {
        let pulse = PulseShape::normalized(*beta).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, seed + i as u64);
        let samples = oracle::synth_baseband(&frame, &pulse, 0.0, &cfg);
        let power = oracle::mean_signal_power(&samples, &cfg);
        let expected = 1.0 - beta / 4.0;
        worst = worst.max((power - expected).abs() / expected);
    }
    CheckResult::new(
        "power-identity",
        worst < 0.01,
        format!("max relative power error = {worst:.3e}"),
    )
}

fn check_empirical_autocorr(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let cfg = WaveformConfig::default().with_frame_len(30_000);
    let mut worst = 0.0_f64;
    for (i, tau) in [-2.5, -1.0, 0.0, 0.5, 1.5, 3.0].iter().enumerate() {
        let measured =
            oracle::empirical_autocorr(&pulse, Constellation::Bpsk, *tau, &cfg, seed + i as u64);
        worst = worst.max((measured - pulse.autocorr(*tau)).abs());
    }
    CheckResult::new(
        "empirical-autocorr",
        worst < 1e-2,
        format!("max |empirical - closed form| = {worst:.3e}"),
    )
}

fn check_unit_power(seed: u64) -> CheckResult {
    let mut worst = 0.0_f64;
    for profile in [
        AmplitudeProfile::Uniform,
        AmplitudeProfile::Exponential { kappa: 0.5 },
    ] {
        let config = ChannelConfig::new(5, 0.6, profile, seed).unwrap();
        for trial in 0..1000 {
            let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
            worst = worst.max((real.power() - 1.0).abs());
        }
    }
    CheckResult::new(
        "realization-unit-power",
        worst < 1e-12,
        format!("max |total power - 1| = {worst:.3e}"),
    )
}

fn check_optimality(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let mut rng = trial_rng(seed ^ 0x5eed, 0);
    let mut violations = 0usize;
    for trial in 0..200 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
        let coeffs = model::characterize(&real, 0.3, &pulse).unwrap();
        let at_opt = model::error_variance(&real, coeffs.gain, 0.3, &pulse, 1.0);
        for _ in 0..20 {
            let delta = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if model::error_variance(&real, coeffs.gain + delta, 0.3, &pulse, 1.0) < at_opt {
                violations += 1;
            }
        }
    }
    CheckResult::new(
        "residual-optimality",
        violations == 0,
        format!("{violations} perturbations undercut the optimum"),
    )
}

fn check_gradient(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let mut worst_grad = 0.0_f64;
    let mut worst_fd = 0.0_f64;
    for trial in 0..200 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
        let coeffs = model::characterize(&real, 0.2, &pulse).unwrap();
        worst_grad = worst_grad
            .max(model::error_variance_gradient(&real, coeffs.gain, 0.2, &pulse, 1.0).norm());
        let h = 1e-5;
        let probe = coeffs.gain + Complex64::new(0.17, -0.23);
        let grad = model::error_variance_gradient(&real, probe, 0.2, &pulse, 1.0);
        let dre = (model::error_variance(&real, probe + Complex64::new(h, 0.0), 0.2, &pulse, 1.0)
            - model::error_variance(&real, probe - Complex64::new(h, 0.0), 0.2, &pulse, 1.0))
            / (2.0 * h);
        let dim = (model::error_variance(&real, probe + Complex64::new(0.0, h), 0.2, &pulse, 1.0)
            - model::error_variance(&real, probe - Complex64::new(0.0, h), 0.2, &pulse, 1.0))
            / (2.0 * h);
        worst_fd = worst_fd.max((grad.re - dre).abs().max((grad.im - dim).abs()));
    }
    CheckResult::new(
        "gradient-stationarity",
        worst_grad < 1e-10 && worst_fd < 1e-6,
        format!("|grad| at optimum {worst_grad:.3e}, finite-difference gap {worst_fd:.3e}"),
    )
}

fn check_orthogonality(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let e_s = 2.0;
    let mut worst = 0.0_f64;
    for trial in 0..1000 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
        let gain = model::desired_gain(&real, 0.25, &pulse);
        worst = worst.max(model::cross_correlation(&real, gain, 0.25, &pulse, e_s).norm());
    }
    CheckResult::new(
        "cross-correlation-zero",
        worst <= 1e-12 * e_s,
        format!("max |L| = {worst:.3e} (budget {:.3e})", 1e-12 * e_s),
    )
}

fn check_consistency(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let e_s = 1.3;
    let mut worst = 0.0_f64;
    for trial in 0..1000 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
        let coeffs = model::characterize(&real, 0.2, &pulse).unwrap();
        let j = model::error_variance(&real, coeffs.gain, 0.2, &pulse, e_s);
        let expected = e_s * coeffs.interference * coeffs.interference;
        worst = worst.max((j - expected).abs() / expected.abs().max(1e-30));
    }
    CheckResult::new(
        "residual-consistency",
        worst < 1e-10,
        format!("max relative |J - E_s eta^2| = {worst:.3e}"),
    )
}

fn check_narrowband_limit(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let timing_cfg = TimingSearchConfig::default();
    let mut worst_gain = 0.0_f64;
    let mut worst_interference = 0.0_f64;
    for trial in 0..200 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial))
            .scale_delays(1e-4 / 0.6);
        let coeffs = search_timing(&real, &pulse, &timing_cfg).unwrap();
        let total: Complex64 = real.gains().iter().sum();
        worst_gain = worst_gain.max((coeffs.gain - total).norm());
        worst_interference = worst_interference.max(coeffs.interference);
    }
    CheckResult::new(
        "narrowband-limit",
        worst_gain < 1e-4 && worst_interference < 1e-3,
        format!("max |gain - sum| = {worst_gain:.3e}, max interference = {worst_interference:.3e}"),
    )
}

fn check_sir_oracle(seed: u64) -> CheckResult {
    let pulse = PulseShape::normalized(0.8).unwrap();
    let cfg = WaveformConfig::default().with_frame_len(100_000);
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let mut worst_db = 0.0_f64;
    for trial in 0..5 {
        let real = ChannelRealization::sample(&config, &mut trial_rng(seed, trial));
        let coeffs = search_timing(&real, &pulse, &TimingSearchConfig::default()).unwrap();
        let frame = SymbolFrame::draw(Constellation::Bpsk, cfg.frame_len, seed + 1000 + trial);
        let measured = oracle::empirical_sir(&frame, &real, &coeffs, &pulse, 1.0, &cfg);
        let closed = coeffs.sir(&pulse);
        worst_db = worst_db.max(10.0 * (measured / closed).log10().abs());
    }
    CheckResult::new(
        "sir-closed-form-vs-oracle",
        worst_db < 0.2,
        format!("max |SIR gap| = {worst_db:.3} dB"),
    )
}

fn check_determinism(seed: u64) -> CheckResult {
    let config = ChannelConfig::new(5, 0.6, AmplitudeProfile::Uniform, seed).unwrap();
    let a = ChannelRealization::sample(&config, &mut trial_rng(seed, 42));
    let b = ChannelRealization::sample(&config, &mut trial_rng(seed, 42));
    let frames_match = SymbolFrame::draw(Constellation::Pam4, 1000, seed)
        == SymbolFrame::draw(Constellation::Pam4, 1000, seed);
    CheckResult::new(
        "seed-determinism",
        a == b && frames_match,
        "identical seeds reproduce identical draws".into(),
    )
}

/// Runs the whole battery with streams derived from `seed`.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_autocorr_peak(),
        check_pulse_nyquist(),
        check_singularity_limits(),
        check_autocorr_shape(),
        check_power_identity(seed),
        check_empirical_autocorr(seed),
        check_unit_power(seed),
        check_optimality(seed),
        check_gradient(seed),
        check_orthogonality(seed),
        check_consistency(seed),
        check_narrowband_limit(seed),
        check_sir_oracle(seed),
        check_determinism(seed),
    ]
}

/// Fixed-width pass/fail table.
pub fn render_report(results: &[CheckResult]) -> String {
    let mut out = String::new();
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{status}  {name:<width$}  {detail}\n",
            name = r.name,
            detail = r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", results.len(), failed));
    out
}
