//! Exhaustive search for the optimal synchronization instant.
//!
//! The search maximizes `|gain(timing)|^2` over a regular grid. Because the
//! pairwise coupling term of the interference power does not depend on the
//! synchronization instant, the same instant simultaneously minimizes the
//! interference coefficient and maximizes the per-realization SIR; debug
//! builds assert this equivalence on every call.

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::model::{self, FadingCoefficients};
use crate::pulse::PulseShape;
use serde::{Deserialize, Serialize};

/// Grid-search parameters, all times in units of the symbol period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingSearchConfig {
    /// Grid spacing.
    pub grid_step: f64,
    /// Lower end of the search range.
    pub search_lo: f64,
    /// Upper end of the search range; `None` uses the configured delay
    /// spread of the realization under search.
    pub search_hi: Option<f64>,
    /// Run one golden-section refinement pass inside the winning grid cell.
    pub refine: bool,
    /// Extend the range by half a symbol period on each side. The optimum
    /// is expected among the path delays but that is not guaranteed; this
    /// is the escape hatch.
    pub widen_half_symbol: bool,
}

impl Default for TimingSearchConfig {
    fn default() -> Self {
        Self {
            grid_step: 1.0 / 200.0,
            search_lo: 0.0,
            search_hi: None,
            refine: true,
            widen_half_symbol: false,
        }
    }
}

impl TimingSearchConfig {
    fn resolve_range(&self, real: &ChannelRealization) -> Result<(f64, f64)> {
        if !self.grid_step.is_finite() || self.grid_step <= 0.0 {
            return Err(Error::Config(format!(
                "grid step must be positive, got {}",
                self.grid_step
            )));
        }
        let mut lo = self.search_lo;
        let mut hi = self
            .search_hi
            .unwrap_or_else(|| real.config().delay_spread());
        if self.widen_half_symbol {
            lo -= 0.5;
            hi += 0.5;
        }
        if lo > hi {
            return Err(Error::Config(format!("empty search range [{lo}, {hi}]")));
        }
        Ok((lo, hi))
    }
}

/// Squared magnitude of the desired-signal coefficient at `timing`.
fn objective(real: &ChannelRealization, pulse: &PulseShape, timing: f64) -> f64 {
    model::desired_gain(real, timing, pulse).norm_sqr()
}

/// Golden-section maximization on `[a, b]`; returns the located abscissa.
fn golden_section_max(
    real: &ChannelRealization,
    pulse: &PulseShape,
    mut a: f64,
    mut b: f64,
) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(real, pulse, c);
    let mut fd = objective(real, pulse, d);
    for _ in 0..80 {
        if b - a < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(real, pulse, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(real, pulse, d);
        }
    }
    0.5 * (a + b)
}

/// Finds the synchronization instant maximizing `|gain|^2` over the grid
/// (ties broken toward the smallest instant), optionally refines it inside
/// the winning cell, and returns the coefficients at the winner.
pub fn search_timing(
    real: &ChannelRealization,
    pulse: &PulseShape,
    cfg: &TimingSearchConfig,
) -> Result<FadingCoefficients> {
    let (lo, hi) = cfg.resolve_range(real)?;

    let steps = ((hi - lo) / cfg.grid_step).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| lo + k as f64 * cfg.grid_step).collect();
    if *grid.last().expect("grid is never empty") < hi {
        grid.push(hi);
    }

    let mut best_timing = grid[0];
    let mut best_value = objective(real, pulse, grid[0]);
    for &timing in &grid[1..] {
        let value = objective(real, pulse, timing);
        if value > best_value {
            best_value = value;
            best_timing = timing;
        }
    }

    #[cfg(debug_assertions)]
    assert_objective_equivalence(real, pulse, &grid, best_value);

    if cfg.refine && grid.len() > 1 {
        let a = (best_timing - cfg.grid_step).max(lo);
        let b = (best_timing + cfg.grid_step).min(hi);
        let refined = golden_section_max(real, pulse, a, b);
        if objective(real, pulse, refined) > best_value {
            best_timing = refined;
        }
    }

    model::characterize(real, best_timing, pulse)
}

/// Checks, over the whole grid, that the maximizer of `|gain|^2` is also
/// the minimizer of the interference power and the maximizer of the
/// per-realization SIR, up to floating-point ties.
#[cfg(debug_assertions)]
fn assert_objective_equivalence(
    real: &ChannelRealization,
    pulse: &PulseShape,
    grid: &[f64],
    best_gain_sq: f64,
) {
    let peak = pulse.peak_autocorr();
    let coupling = model::interference_cross_term(real, pulse);
    let residual = |gain_sq: f64| (peak * (real.power() - gain_sq) + coupling).max(0.0);
    let sir = |gain_sq: f64| {
        let r = residual(gain_sq);
        if r == 0.0 {
            f64::INFINITY
        } else {
            gain_sq * peak / r
        }
    };

    let mut min_residual = f64::INFINITY;
    let mut gain_sq_at_min_residual = 0.0;
    let mut max_sir = f64::NEG_INFINITY;
    let mut gain_sq_at_max_sir = 0.0;
    for &timing in grid {
        let gain_sq = objective(real, pulse, timing);
        if residual(gain_sq) < min_residual {
            min_residual = residual(gain_sq);
            gain_sq_at_min_residual = gain_sq;
        }
        if sir(gain_sq) > max_sir {
            max_sir = sir(gain_sq);
            gain_sq_at_max_sir = gain_sq;
        }
    }
    let slack = 1e-9 * best_gain_sq.max(1e-300);
    debug_assert!(
        gain_sq_at_min_residual >= best_gain_sq - slack,
        "interference minimizer disagrees with gain maximizer"
    );
    debug_assert!(
        gain_sq_at_max_sir >= best_gain_sq - slack,
        "SIR maximizer disagrees with gain maximizer"
    );
}
