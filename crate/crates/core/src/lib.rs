//! Characterization and simulation of mediumband multipath channels: the
//! regime where the delay spread is too large for a single multiplicative
//! fading factor and too small to resolve individual paths.
//!
//! The library provides:
//!
//! - [`pulse`]: the raised-cosine pulse and the closed-form autocorrelation
//!   of the modulated signal, with continuous handling of their removable
//!   singularities;
//! - [`channel`]: seeded random multipath realizations with uniform or
//!   exponential amplitude profiles;
//! - [`model`]: the closed-form fading coefficients of the desired and
//!   interfering signals, the residual-power functional and its gradient,
//!   cross-correlation, and SINR;
//! - [`timing`]: exhaustive grid search (plus golden-section refinement)
//!   for the optimal synchronization instant;
//! - [`oracle`]: a brute-force waveform synthesizer that measures the same
//!   quantities empirically on oversampled frames;
//! - [`sweep`]: deterministic parallel Monte-Carlo sweeps of SIR against
//!   delay spread and path count;
//! - [`cli`] and [`validate`]: the command-line frontend and its
//!   self-check battery.
//!
//! Times are normalized: delays, lags, and synchronization instants are in
//! units of the symbol period.

pub mod channel;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod pulse;
pub mod sweep;
pub mod timing;
pub mod validate;

pub use channel::{
    percentage_delay_spread, profile_amplitudes, AmplitudeProfile, ChannelConfig,
    ChannelRealization,
};
pub use error::{Error, Result};
pub use model::{FadingCoefficients, LinkBudget};
pub use oracle::{Constellation, SymbolFrame, WaveformConfig};
pub use pulse::PulseShape;
pub use sweep::{aggregate_sir, run_delay_spread_sweep, run_n_sweep, SweepConfig, SweepResult};
pub use timing::{search_timing, TimingSearchConfig};
