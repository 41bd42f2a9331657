//! Command-line frontend: argument parsing, configuration files, CSV/JSON
//! emission, and the validation runner.
//!
//! Outputs are diff-stable: floats are rendered with 17 significant digits
//! and a `.` decimal separator, infinite SIR values become the literal
//! `inf` in CSV and null-plus-flag in JSON. File outputs embed (JSON) or
//! are accompanied by (CSV sidecar) a run manifest with the resolved
//! configuration, master seed, timestamps, and artifact version.

use crate::channel::{
    trial_rng, AmplitudeProfile, ChannelConfig, ChannelRealization, DEFAULT_KAPPA,
};
use crate::error::{Error, Result};
use crate::model::{self, LinkBudget};
use crate::oracle::{self, Constellation, SymbolFrame, WaveformConfig};
use crate::pulse::PulseShape;
use crate::sweep::{run_delay_spread_sweep, run_n_sweep, SweepConfig, SweepResult};
use crate::timing::{search_timing, TimingSearchConfig};
use crate::validate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Renders a float with 17 significant digits; infinities become `inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Renders complex waveform samples as `t_over_Ts,re,im` CSV.
pub fn waveform_to_csv(samples: &[num_complex::Complex64], oversampling: usize) -> String {
    let mut out = String::from("t_over_Ts,re,im\n");
    for (i, z) in samples.iter().enumerate() {
        let t = i as f64 / oversampling as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(t),
            format_float(z.re),
            format_float(z.im)
        ));
    }
    out
}

/// Provenance record attached to every emitted output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub master_seed: u64,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub config: serde_json::Value,
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn artifact_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[derive(Debug, Parser)]
#[command(
    name = "mediumband",
    version,
    about = "Mediumband multipath channel characterization and SIR simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Tabulate the closed-form autocorrelation R(tau).
    Autocorr(AutocorrArgs),
    /// Sample one channel realization and print its characterization.
    Realization(RealizationArgs),
    /// Sweep SIR against percentage delay spread.
    SirSweep(SweepArgs),
    /// Sweep SIR against the number of multipath components.
    NSweep(SweepArgs),
    /// Run the self-check battery and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Uniform,
    Exponential,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RealizationFormatArg {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct AutocorrArgs {
    /// Roll-off factor.
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    /// Half-range of tabulated lags, in symbol periods.
    #[arg(long, default_value_t = 5.0)]
    tau_max: f64,
    /// Lag grid step, in symbol periods.
    #[arg(long, default_value_t = 0.01)]
    tau_step: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct RealizationArgs {
    /// Roll-off factor.
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    /// Number of multipath components.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Percentage delay spread.
    #[arg(long, default_value_t = 60.0)]
    tm_percent: f64,
    /// Amplitude profile.
    #[arg(long, value_enum, default_value_t = ProfileArg::Uniform)]
    profile: ProfileArg,
    /// Decay rate for the exponential profile.
    #[arg(long)]
    kappa: Option<f64>,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timing-search grid step, in symbol periods.
    #[arg(long)]
    step: Option<f64>,
    /// Symbol energy.
    #[arg(long, default_value_t = 1.0)]
    es: f64,
    /// Noise variance; when positive, SINR is reported alongside SIR.
    #[arg(long, default_value_t = 0.0)]
    sigma2: f64,
    /// Dump the synthesized received waveform as CSV to this path.
    #[arg(long)]
    dump_waveform: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = RealizationFormatArg::Text)]
    format: RealizationFormatArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Roll-off factor.
    #[arg(long)]
    beta: Option<f64>,
    /// Path count (single value; n-sweep accepts a comma list).
    #[arg(long)]
    n: Option<String>,
    /// Fixed percentage delay spread for n-sweep.
    #[arg(long)]
    tm_percent: Option<f64>,
    /// Swept percents for sir-sweep: `lo:hi:step` or a comma list.
    #[arg(long)]
    percents: Option<String>,
    /// Amplitude profile.
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    /// Decay rate for the exponential profile.
    #[arg(long)]
    kappa: Option<f64>,
    /// Trial cap per sweep point.
    #[arg(long)]
    trials: Option<usize>,
    /// Convergence tolerance: relative change over the trailing 10% of trials.
    #[arg(long)]
    tol: Option<f64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Timing-search grid step, in symbol periods.
    #[arg(long)]
    step: Option<f64>,
    /// Symbol energy.
    #[arg(long)]
    es: Option<f64>,
    /// Noise variance.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Seed for the seeded checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Values read from a flat `key = value` configuration file. Every field is
/// optional; command-line flags take precedence.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub beta: Option<f64>,
    pub n: Option<Vec<usize>>,
    pub percents: Option<Vec<f64>>,
    pub tm_percent: Option<f64>,
    pub profile: Option<String>,
    pub kappa: Option<f64>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub step: Option<f64>,
    pub es: Option<f64>,
    pub sigma2: Option<f64>,
}

/// Parses `lo:hi:step` ranges or comma lists of percents.
pub fn parse_percent_list(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "percent range must be lo:hi:step, got `{text}`"
            )));
        }
        let lo = parse_f64("percents", parts[0])?;
        let hi = parse_f64("percents", parts[1])?;
        let step = parse_f64("percents", parts[2])?;
        let finite = lo.is_finite() && hi.is_finite() && step.is_finite();
        if !finite || step <= 0.0 || hi < lo {
            return Err(Error::Config(format!(
                "percent range `{text}` must have positive step and hi >= lo"
            )));
        }
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let value = lo + k as f64 * step;
            if value > hi + 1e-9 * step {
                break;
            }
            out.push(value);
            k += 1;
        }
        Ok(out)
    } else {
        text.split(',')
            .map(|part| parse_f64("percents", part))
            .collect()
    }
}

/// Parses a comma list of positive integers.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("expected a positive integer, got `{part}`")))
        })
        .collect()
}

fn parse_f64(key: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("key `{key}` expects a number, got `{text}`")))
}

fn parse_u64(key: &str, text: &str) -> Result<u64> {
    text.trim().parse::<u64>().map_err(|_| {
        Error::Config(format!(
            "key `{key}` expects an unsigned integer, got `{text}`"
        ))
    })
}

fn parse_usize(key: &str, text: &str) -> Result<usize> {
    text.trim().parse::<usize>().map_err(|_| {
        Error::Config(format!(
            "key `{key}` expects an unsigned integer, got `{text}`"
        ))
    })
}

/// Parses the flat configuration format: UTF-8 `key = value` lines with
/// `#` comments. Unknown keys are errors.
pub fn parse_config_text(text: &str) -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "beta" => cfg.beta = Some(parse_f64(key, value)?),
            "n" => cfg.n = Some(parse_usize_list(value)?),
            "percents" => cfg.percents = Some(parse_percent_list(value)?),
            "tm_percent" => cfg.tm_percent = Some(parse_f64(key, value)?),
            "profile" => match value {
                "uniform" | "exponential" => cfg.profile = Some(value.to_string()),
                other => {
                    return Err(Error::Config(format!(
                        "profile must be `uniform` or `exponential`, got `{other}`"
                    )))
                }
            },
            "kappa" => cfg.kappa = Some(parse_f64(key, value)?),
            "trials" => cfg.trials = Some(parse_usize(key, value)?),
            "tol" => cfg.tol = Some(parse_f64(key, value)?),
            "seed" => cfg.seed = Some(parse_u64(key, value)?),
            "step" => cfg.step = Some(parse_f64(key, value)?),
            "es" => cfg.es = Some(parse_f64(key, value)?),
            "sigma2" => cfg.sigma2 = Some(parse_f64(key, value)?),
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
    }
    Ok(cfg)
}

/// Loads the flat configuration file format from disk.
pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config `{}`: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepMode {
    DelaySpread,
    PathCount,
}

impl SweepMode {
    fn name(&self) -> &'static str {
        match self {
            SweepMode::DelaySpread => "sir-sweep",
            SweepMode::PathCount => "n-sweep",
        }
    }
}

fn resolve_profile(
    flag: Option<ProfileArg>,
    file: Option<&str>,
    kappa: Option<f64>,
) -> AmplitudeProfile {
    let exponential = match (flag, file) {
        (Some(ProfileArg::Exponential), _) => true,
        (Some(ProfileArg::Uniform), _) => false,
        (None, Some("exponential")) => true,
        _ => false,
    };
    if exponential {
        AmplitudeProfile::Exponential {
            kappa: kappa.unwrap_or(DEFAULT_KAPPA),
        }
    } else {
        AmplitudeProfile::Uniform
    }
}

fn env_workers() -> Result<Option<usize>> {
    match std::env::var("MEDIUMBAND_THREADS") {
        Ok(raw) => {
            let n = raw.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!(
                    "MEDIUMBAND_THREADS must be a positive integer, got `{raw}`"
                ))
            })?;
            if n == 0 {
                return Err(Error::Config(
                    "MEDIUMBAND_THREADS must be a positive integer, got `0`".into(),
                ));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Materializes the effective sweep configuration: documented defaults,
/// overridden by the configuration file, overridden by flags.
fn resolve_sweep_config(args: &SweepArgs, mode: SweepMode) -> Result<SweepConfig> {
    let file = match &args.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };

    let mut cfg = SweepConfig::new(args.beta.or(file.beta).unwrap_or(0.8));

    let n_list = match (&args.n, &file.n) {
        (Some(text), _) => parse_usize_list(text)?,
        (None, Some(list)) => list.clone(),
        (None, None) => match mode {
            SweepMode::DelaySpread => vec![5],
            SweepMode::PathCount => vec![2, 5, 10, 20, 30],
        },
    };
    cfg.n_paths = n_list;

    cfg.delay_spread_percents = match mode {
        SweepMode::DelaySpread => match (&args.percents, &file.percents) {
            (Some(text), _) => parse_percent_list(text)?,
            (None, Some(list)) => list.clone(),
            (None, None) => parse_percent_list("10:90:10")?,
        },
        SweepMode::PathCount => {
            vec![args.tm_percent.or(file.tm_percent).unwrap_or(60.0)]
        }
    };

    cfg.profile = resolve_profile(
        args.profile,
        file.profile.as_deref(),
        args.kappa.or(file.kappa),
    );
    if let Some(trials) = args.trials.or(file.trials) {
        cfg.trials = trials;
    }
    if let Some(tol) = args.tol.or(file.tol) {
        cfg.convergence_rel_tol = tol;
    }
    cfg.master_seed = args.seed.or(file.seed).unwrap_or(0);
    if let Some(step) = args.step.or(file.step) {
        cfg.timing.grid_step = step;
    }
    if let Some(es) = args.es.or(file.es) {
        cfg.symbol_energy = es;
    }
    if let Some(sigma2) = args.sigma2.or(file.sigma2) {
        cfg.noise_variance = sigma2;
    }
    cfg.workers = env_workers()?;
    cfg.validate()?;
    Ok(cfg)
}

/// Sweep results as CSV, one row per point.
pub fn sweep_results_to_csv(results: &[SweepResult]) -> String {
    let mut out = String::from(
        "percent_or_N,sir_db,desired_mean,interference_mean,trials,\
         stderr_desired,stderr_interference,realized_tm_mean\n",
    );
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_float(r.label),
            format_float(r.sir_db),
            format_float(r.mean_desired),
            format_float(r.mean_interference),
            r.trials,
            format_float(r.stderr_desired),
            format_float(r.stderr_interference),
            format_float(r.realized_delay_spread_mean),
        ));
    }
    out
}

fn manifest_sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn emit_text(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Writes csv content plus its manifest sidecar (file output), or the bare
/// CSV to stdout.
fn emit_csv(out: Option<&Path>, content: &str, manifest: &RunManifest) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            let manifest_json = serde_json::to_string_pretty(manifest)
                .map_err(|e| Error::Config(format!("manifest serialization failed: {e}")))?;
            fs::write(manifest_sidecar_path(path), manifest_json + "\n")?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let content = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("JSON serialization failed: {e}")))?
        + "\n";
    emit_text(out, &content)
}

fn run_sweep(args: &SweepArgs, mode: SweepMode) -> Result<i32> {
    let started = unix_now();
    let cfg = resolve_sweep_config(args, mode)?;
    let results = match mode {
        SweepMode::DelaySpread => run_delay_spread_sweep(&cfg)?,
        SweepMode::PathCount => run_n_sweep(&cfg)?,
    };
    let manifest = RunManifest {
        subcommand: mode.name().to_string(),
        version: artifact_version(),
        master_seed: cfg.master_seed,
        started_unix_s: started,
        finished_unix_s: unix_now(),
        config: serde_json::to_value(&cfg)
            .map_err(|e| Error::Config(format!("config echo failed: {e}")))?,
    };
    match args.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => emit_csv(
            args.out.as_deref(),
            &sweep_results_to_csv(&results),
            &manifest,
        )?,
        FormatArg::Json => emit_json(
            args.out.as_deref(),
            &serde_json::json!({ "manifest": manifest, "results": results }),
        )?,
    }
    Ok(0)
}

fn run_autocorr(args: &AutocorrArgs) -> Result<i32> {
    let started = unix_now();
    let pulse = PulseShape::normalized(args.beta)?;
    let finite = args.tau_step.is_finite() && args.tau_max.is_finite();
    if !finite || args.tau_step <= 0.0 || args.tau_max < 0.0 {
        return Err(Error::Config(
            "tau-max must be nonnegative and tau-step positive".into(),
        ));
    }
    let steps = (2.0 * args.tau_max / args.tau_step).round() as usize;
    let rows: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let tau = -args.tau_max + i as f64 * args.tau_step;
            (tau, pulse.autocorr(tau))
        })
        .collect();
    let manifest = RunManifest {
        subcommand: "autocorr".to_string(),
        version: artifact_version(),
        master_seed: 0,
        started_unix_s: started,
        finished_unix_s: unix_now(),
        config: serde_json::json!({
            "beta": args.beta,
            "tau_max": args.tau_max,
            "tau_step": args.tau_step,
        }),
    };
    match args.format {
        FormatArg::Csv => {
            let mut content = String::from("tau_over_Ts,R\n");
            for (tau, r) in &rows {
                content.push_str(&format!("{},{}\n", format_float(*tau), format_float(*r)));
            }
            emit_csv(args.out.as_deref(), &content, &manifest)?;
        }
        FormatArg::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(tau, r)| serde_json::json!({ "tau_over_Ts": tau, "R": r }))
                .collect();
            emit_json(
                args.out.as_deref(),
                &serde_json::json!({ "manifest": manifest, "rows": rows }),
            )?;
        }
    }
    Ok(0)
}

fn db_or_inf(ratio: f64) -> (f64, bool) {
    if ratio.is_infinite() {
        (f64::INFINITY, true)
    } else {
        (10.0 * ratio.log10(), false)
    }
}

fn run_realization(args: &RealizationArgs) -> Result<i32> {
    let started = unix_now();
    let pulse = PulseShape::normalized(args.beta)?;
    let profile = resolve_profile(Some(args.profile), None, args.kappa);
    let spread = args.tm_percent / 100.0;
    let channel = ChannelConfig::new(args.n, spread, profile, args.seed)?;
    let real = ChannelRealization::sample(&channel, &mut trial_rng(args.seed, 0));
    let mut timing_cfg = TimingSearchConfig::default();
    if let Some(step) = args.step {
        timing_cfg.grid_step = step;
    }
    let coeffs = search_timing(&real, &pulse, &timing_cfg)?;
    let budget = LinkBudget::new(args.es, args.sigma2)?;
    let (sir_db, sir_infinite) = db_or_inf(coeffs.sir(&pulse));
    let (sinr_db, sinr_infinite) = db_or_inf(model::sinr(&coeffs, &budget, &pulse));

    if let Some(path) = &args.dump_waveform {
        let wave_cfg = WaveformConfig::default().with_frame_len(256);
        let frame = SymbolFrame::draw(Constellation::Bpsk, wave_cfg.frame_len, args.seed);
        let samples = oracle::synth_received(&frame, &real, &pulse, args.es, &wave_cfg);
        fs::write(path, waveform_to_csv(&samples, wave_cfg.oversampling))?;
    }

    let manifest = RunManifest {
        subcommand: "realization".to_string(),
        version: artifact_version(),
        master_seed: args.seed,
        started_unix_s: started,
        finished_unix_s: unix_now(),
        config: serde_json::json!({
            "beta": args.beta,
            "n": args.n,
            "tm_percent": args.tm_percent,
            "profile": profile,
            "seed": args.seed,
            "grid_step": timing_cfg.grid_step,
            "es": args.es,
            "sigma2": args.sigma2,
        }),
    };

    match args.format {
        RealizationFormatArg::Text => {
            let mut content = String::new();
            content.push_str(&format!(
                "channel: n = {}, tm_percent = {}, profile = {:?}, seed = {}\n",
                args.n, args.tm_percent, profile, args.seed
            ));
            content
                .push_str("path  gain_re                 gain_im                 delay_over_Ts\n");
            for (g, d) in real.gains().iter().zip(real.delays()) {
                content.push_str(&format!(
                    "      {:<23} {:<23} {}\n",
                    format_float(g.re),
                    format_float(g.im),
                    format_float(*d)
                ));
            }
            content.push_str(&format!("timing: {}\n", format_float(coeffs.timing)));
            content.push_str(&format!(
                "gain: {} {}\n",
                format_float(coeffs.gain.re),
                format_float(coeffs.gain.im)
            ));
            content.push_str(&format!(
                "interference: {}\n",
                format_float(coeffs.interference)
            ));
            content.push_str(&format!("sir_db: {}\n", format_float(sir_db)));
            if args.sigma2 > 0.0 {
                content.push_str(&format!("sinr_db: {}\n", format_float(sinr_db)));
            }
            emit_text(args.out.as_deref(), &content)?;
        }
        RealizationFormatArg::Json => {
            let mut body = serde_json::json!({
                "manifest": manifest,
                "realization": real.to_json(),
                "timing": coeffs.timing,
                "gain": [coeffs.gain.re, coeffs.gain.im],
                "interference": coeffs.interference,
                "sir_db": if sir_infinite { serde_json::Value::Null } else { serde_json::json!(sir_db) },
                "sir_infinite": sir_infinite,
            });
            if args.sigma2 > 0.0 {
                body["sinr_db"] = if sinr_infinite {
                    serde_json::Value::Null
                } else {
                    serde_json::json!(sinr_db)
                };
                body["sinr_infinite"] = serde_json::json!(sinr_infinite);
            }
            emit_json(args.out.as_deref(), &body)?;
        }
    }
    Ok(0)
}

fn run_validate(args: &ValidateArgs) -> Result<i32> {
    let results = validate::run_all(args.seed);
    print!("{}", validate::render_report(&results));
    Ok(if results.iter().all(|r| r.passed) {
        0
    } else {
        1
    })
}

/// Parses `argv` and runs the selected subcommand. Returns the process exit
/// code: 0 on success, 1 on validation failure, 2 on configuration or usage
/// errors.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        CliCommand::Autocorr(args) => run_autocorr(args),
        CliCommand::Realization(args) => run_realization(args),
        CliCommand::SirSweep(args) => run_sweep(args, SweepMode::DelaySpread),
        CliCommand::NSweep(args) => run_sweep(args, SweepMode::PathCount),
        CliCommand::Validate(args) => run_validate(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        let rendered = format_float(0.1);
        assert!(rendered.starts_with("1.000000000000000"));
        assert_eq!(rendered.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn percent_range_parsing() {
        let percents = parse_percent_list("10:90:10").unwrap();
        assert_eq!(percents.len(), 9);
        assert_eq!(percents[0], 10.0);
        assert_eq!(percents[8], 90.0);
        let explicit = parse_percent_list("5,25,60").unwrap();
        assert_eq!(explicit, vec![5.0, 25.0, 60.0]);
        assert!(parse_percent_list("10:90").is_err());
        assert!(parse_percent_list("90:10:10").is_err());
        assert!(parse_percent_list("a,b").is_err());
    }

    #[test]
    fn config_text_parsing() {
        let cfg = parse_config_text(
            "# comment\nbeta = 0.8\nn = 2,5\npercents = 10:30:10\nseed = 9\ntrials = 500\n",
        )
        .unwrap();
        assert_eq!(cfg.beta, Some(0.8));
        assert_eq!(cfg.n, Some(vec![2, 5]));
        assert_eq!(cfg.percents, Some(vec![10.0, 20.0, 30.0]));
        assert_eq!(cfg.seed, Some(9));
        assert_eq!(cfg.trials, Some(500));
        assert_eq!(parse_config_text("").unwrap(), FileConfig::default());
        assert!(parse_config_text("unknown_key = 1").is_err());
        assert!(parse_config_text("beta 0.8").is_err());
        assert!(parse_config_text("beta = fast").is_err());
        assert!(parse_config_text("profile = triangular").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join("mediumband-cli-test-precedence");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.txt");
        fs::write(&path, "beta = 0.8\ntrials = 150\n").unwrap();
        let args = SweepArgs {
            beta: Some(0.5),
            n: None,
            tm_percent: None,
            percents: None,
            profile: None,
            kappa: None,
            trials: None,
            tol: None,
            seed: None,
            step: None,
            es: None,
            sigma2: None,
            out: None,
            format: None,
            config: Some(path),
        };
        let cfg = resolve_sweep_config(&args, SweepMode::DelaySpread).unwrap();
        assert_eq!(cfg.beta, 0.5);
        assert_eq!(cfg.trials, 150);
        assert_eq!(cfg.delay_spread_percents.len(), 9);
    }

    #[test]
    fn out_of_range_beta_names_valid_range() {
        let args = SweepArgs {
            beta: Some(1.5),
            n: None,
            tm_percent: None,
            percents: None,
            profile: None,
            kappa: None,
            trials: None,
            tol: None,
            seed: None,
            step: None,
            es: None,
            sigma2: None,
            out: None,
            format: None,
            config: None,
        };
        let err = resolve_sweep_config(&args, SweepMode::DelaySpread).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("[0, 1]"), "message was: {message}");
    }

    #[test]
    fn sweep_config_round_trips_through_json() {
        let mut cfg = SweepConfig::new(0.8);
        cfg.profile = AmplitudeProfile::Exponential { kappa: 0.7 };
        cfg.delay_spread_percents = vec![10.0, 60.0];
        cfg.master_seed = 17;
        let echoed = serde_json::to_value(&cfg).unwrap();
        let reloaded: SweepConfig = serde_json::from_value(echoed).unwrap();
        assert_eq!(cfg, reloaded);
    }

    #[test]
    fn csv_rendering_uses_inf_sentinel() {
        let result = SweepResult {
            label: 1.0,
            sir_db: f64::INFINITY,
            sir_infinite: true,
            mean_desired: 0.75,
            mean_interference: 0.0,
            trials: 100,
            stderr_desired: 0.01,
            stderr_interference: 0.0,
            realized_delay_spread_mean: 0.0,
            converged: true,
        };
        let csv = sweep_results_to_csv(&[result]);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("percent_or_N,sir_db"));
        let row = lines.next().unwrap();
        assert!(row.contains(",inf,"), "row was: {row}");
    }

    #[test]
    fn manifest_sidecar_appends_suffix() {
        let path = manifest_sidecar_path(Path::new("out/results.csv"));
        assert_eq!(path, PathBuf::from("out/results.csv.manifest.json"));
    }
}
