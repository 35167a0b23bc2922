//! Trial loops over signals, methods and SNRs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nide_core::baselines::{denoise_with, Baseline};
use nide_core::nide::{denoise, BandModel, DenoiseConfig};
use nide_core::noise_model::{calibrate_noise_to_snr, gen_noise_with, theoretical_profile};
use nide_core::signals::gen_signal;
use nide_core::{NoiseKind, NoiseSpec, SignalName};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{BenchError, Result};
use crate::metrics::{fmt_sig6, mean_std, normalized_mse, round_sig6, MseDenominator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Nide,
    Visu,
    Sure,
    Bayes,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Nide, Method::Visu, Method::Sure, Method::Bayes];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Nide => "nide",
            Method::Visu => "visu",
            Method::Sure => "sure",
            Method::Bayes => "bayes",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nide" => Ok(Method::Nide),
            other => match other.parse::<Baseline>()? {
                Baseline::Visu => Ok(Method::Visu),
                Baseline::Sure => Ok(Method::Sure),
                Baseline::Bayes => Ok(Method::Bayes),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(BenchError::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub signals: Vec<SignalName>,
    pub methods: Vec<Method>,
    pub snr_db: Vec<f64>,
    pub noise: NoiseKind,
    pub trials: usize,
    pub seed: u64,
    pub length: usize,
    pub levels: usize,
    pub lambda: f64,
    pub mse_denominator: MseDenominator,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            signals: vec![SignalName::Blocks],
            methods: Method::ALL.to_vec(),
            snr_db: vec![1.0, 4.0, 8.0, 10.0, 14.0],
            noise: NoiseKind::White,
            trials: 100,
            seed: 0,
            length: 2048,
            levels: 5,
            lambda: 4.5,
            mse_denominator: MseDenominator::NormSquared,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.signals.is_empty() || self.methods.is_empty() || self.snr_db.is_empty() {
            return Err(BenchError::Config(
                "signals, methods and SNRs must be non-empty".into(),
            ));
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(BenchError::Config(format!("SNR {s} is not finite")));
        }
        self.noise.validate()?;
        self.denoise_config()?.validate()?;
        Ok(())
    }

    /// Pipeline settings shared by every method: MAD σ, and for NIDe a
    /// colored band whenever the noise is colored.
    pub fn denoise_config(&self) -> Result<DenoiseConfig> {
        let band = if self.noise.is_white() {
            BandModel::White
        } else {
            BandModel::Colored(theoretical_profile(&self.noise_spec(), self.length)?)
        };
        Ok(DenoiseConfig {
            levels: self.levels,
            lambda: self.lambda,
            band,
            ..Default::default()
        })
    }

    fn noise_spec(&self) -> NoiseSpec {
        NoiseSpec {
            kind: self.noise.clone(),
            sigma: 1.0,
        }
    }
}

/// One table cell: a (signal, method, SNR) triple aggregated over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    #[serde(serialize_with = "ser_display")]
    pub signal: SignalName,
    #[serde(serialize_with = "ser_display")]
    pub method: Method,
    #[serde(serialize_with = "ser_sig6")]
    pub snr_db: f64,
    #[serde(serialize_with = "ser_display")]
    pub noise: NoiseKind,
    #[serde(serialize_with = "ser_sig6")]
    pub mean_mse: f64,
    #[serde(serialize_with = "ser_sig6")]
    pub std_mse: f64,
    pub trials: usize,
}

fn ser_display<T: fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_sig6<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig6(*v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
}

pub const CSV_HEADER: &str = "signal,method,snr_db,noise,mean_mse,std_mse,trials";

impl ExperimentResult {
    /// Row for the given cell, if it was run.
    pub fn get(&self, signal: SignalName, method: Method, snr_db: f64) -> Option<&ExperimentRow> {
        self.rows
            .iter()
            .find(|r| r.signal == signal && r.method == method && r.snr_db == snr_db)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            // noise specs such as "ma:1,0.5" contain commas
            let noise = r.noise.to_string();
            let noise = if noise.contains(',') {
                format!("\"{noise}\"")
            } else {
                noise
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.signal,
                r.method,
                fmt_sig6(r.snr_db),
                noise,
                fmt_sig6(r.mean_mse),
                fmt_sig6(r.std_mse),
                r.trials
            )?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: OutputFormat) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Generator for trial `trial`: the seed picks the key, the trial index the
/// stream, so every trial is independent of scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs `method` once on `observed`.
pub fn run_method(method: Method, observed: &[f64], config: &DenoiseConfig) -> Result<Vec<f64>> {
    let out = match method {
        Method::Nide => denoise(observed, config)?,
        Method::Visu => denoise_with(Baseline::Visu, observed, config)?,
        Method::Sure => denoise_with(Baseline::Sure, observed, config)?,
        Method::Bayes => denoise_with(Baseline::Bayes, observed, config)?,
    };
    Ok(out.denoised)
}

/// Normalized MSE of every method on one trial, in `config.methods` order.
///
/// All signals and SNRs of a trial share one noise draw, rescaled per SNR.
pub fn run_trial(
    config: &ExperimentConfig,
    denoise_config: &DenoiseConfig,
    signal: &[f64],
    snr_db: f64,
    trial: usize,
) -> Result<Vec<f64>> {
    let mut rng = trial_rng(config.seed, trial);
    let noise = gen_noise_with(&config.noise_spec(), signal.len(), &mut rng)?;
    let noise = calibrate_noise_to_snr(signal, &noise, snr_db)?;
    let observed: Vec<f64> = signal.iter().zip(&noise).map(|(s, v)| s + v).collect();
    config
        .methods
        .iter()
        .map(|&m| {
            normalized_mse(
                &run_method(m, &observed, denoise_config)?,
                signal,
                config.mse_denominator,
            )
        })
        .collect()
}

/// Mean and standard deviation of the normalized MSE for every
/// (signal, SNR, method) cell. Trials run in parallel; per-trial values are
/// reduced in trial order, so the output does not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let denoise_config = config.denoise_config()?;
    let mut rows = Vec::new();
    for &name in &config.signals {
        let signal = gen_signal(name, config.length)?.samples;
        for &snr in &config.snr_db {
            let per_trial: Vec<Vec<f64>> = (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(config, &denoise_config, &signal, snr, t))
                .collect::<Result<_>>()?;
            for (k, &method) in config.methods.iter().enumerate() {
                let values: Vec<f64> = per_trial.iter().map(|v| v[k]).collect();
                let (mean_mse, std_mse) = mean_std(&values);
                rows.push(ExperimentRow {
                    signal: name,
                    method,
                    snr_db: snr,
                    noise: config.noise.clone(),
                    mean_mse,
                    std_mse,
                    trials: config.trials,
                });
            }
        }
    }
    Ok(ExperimentResult { rows })
}

/// Mean NIDe error for one λ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_display")]
    pub signal: SignalName,
    #[serde(serialize_with = "ser_sig6")]
    pub snr_db: f64,
    #[serde(serialize_with = "ser_sig6")]
    pub lambda: f64,
    #[serde(serialize_with = "ser_sig6")]
    pub mean_mse: f64,
    #[serde(serialize_with = "ser_sig6")]
    pub std_mse: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Row with the smallest mean error.
    pub fn best(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .min_by(|a, b| a.mean_mse.total_cmp(&b.mean_mse))
    }

    /// `mean(λ) / min_λ' mean(λ')` for the row with the given λ.
    pub fn ratio_to_best(&self, lambda: f64) -> Option<f64> {
        let best = self.best()?.mean_mse;
        let row = self.rows.iter().find(|r| r.lambda == lambda)?;
        Some(row.mean_mse / best)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "signal,snr_db,lambda,mean_mse,std_mse,trials")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.signal,
                fmt_sig6(r.snr_db),
                fmt_sig6(r.lambda),
                fmt_sig6(r.mean_mse),
                fmt_sig6(r.std_mse),
                r.trials
            )?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, mut out: W, format: OutputFormat) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}

/// NIDe error over a list of λ values, every λ seeing the same noise draws.
pub fn lambda_sweep(base: &ExperimentConfig, lambdas: &[f64]) -> Result<SweepResult> {
    if lambdas.is_empty() {
        return Err(BenchError::Config("no lambda values given".into()));
    }
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let config = ExperimentConfig {
            methods: vec![Method::Nide],
            lambda,
            ..base.clone()
        };
        for r in run_experiment(&config)?.rows {
            rows.push(SweepRow {
                signal: r.signal,
                snr_db: r.snr_db,
                lambda,
                mean_mse: r.mean_mse,
                std_mse: r.std_mse,
                trials: r.trials,
            });
        }
    }
    Ok(SweepResult { rows })
}
