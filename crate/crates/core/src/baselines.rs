//! Classical shrinkage thresholds used as comparators.
//!
//! VisuShrink applies the universal threshold `σ√(2 ln N)` to every detail
//! coefficient. SureShrink (hybrid form) and BayesShrink pick a threshold
//! per detail level.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nide::{
    passthrough, shrink, sigma_negligible, DenoiseConfig, DenoiseResult, ThresholdScope,
};
use crate::wavelet::{dwt_forward, dwt_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Baseline {
    Visu,
    Sure,
    Bayes,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::Visu, Baseline::Sure, Baseline::Bayes];

    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::Visu => "visu",
            Baseline::Sure => "sure",
            Baseline::Bayes => "bayes",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "visu" | "visushrink" => Ok(Baseline::Visu),
            "sure" | "sureshrink" => Ok(Baseline::Sure),
            "bayes" | "bayesshrink" => Ok(Baseline::Bayes),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

fn check_sigma_nonneg(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// Universal threshold `σ·√(2·ln n)`.
pub fn visu_threshold(n: usize, sigma: f64) -> Result<f64> {
    check_sigma_nonneg(sigma)?;
    if n == 0 {
        return Err(Error::InvalidLength);
    }
    Ok(sigma * (2.0 * (n as f64).ln()).sqrt())
}

/// Stein unbiased risk of soft thresholding unit-variance data `x` at `t`:
/// `n − 2·#{|x_i| ≤ t} + Σ min(x_i², t²)`.
pub fn sure_risk(x: &[f64], t: f64) -> f64 {
    let n = x.len() as f64;
    let below = x.iter().filter(|v| v.abs() <= t).count() as f64;
    let clipped: f64 = x.iter().map(|v| (v * v).min(t * t)).sum();
    n - 2.0 * below + clipped
}

/// Threshold minimising [`sure_risk`] over `t ≥ 0` for unit-variance `x`.
///
/// Between consecutive sorted magnitudes the risk increases in `t`, so the
/// minimum is attained at zero or at one of the magnitudes.
pub fn sure_min_threshold(x: &[f64]) -> f64 {
    let mut sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    sq.sort_by(f64::total_cmp);
    let n = sq.len();
    let zeros = sq.iter().take_while(|&&v| v == 0.0).count();
    let mut best_t = 0.0;
    let mut best = n as f64 - 2.0 * zeros as f64;
    let mut cum = 0.0;
    let mut k = 0;
    while k < n {
        // group ties so the count uses every |x| equal to the candidate
        let value = sq[k];
        let mut j = k;
        while j < n && sq[j] == value {
            cum += sq[j];
            j += 1;
        }
        let risk = n as f64 - 2.0 * j as f64 + cum + (n - j) as f64 * value;
        if risk < best {
            best = risk;
            best_t = value.sqrt();
        }
        k = j;
    }
    best_t
}

/// Hybrid SureShrink threshold for one detail band.
///
/// Falls back to the band's universal threshold when the band is sparse,
/// i.e. when `Σ(x² − 1)/n ≤ (log₂ n)^{3/2}/√n` for `x = band/σ`; otherwise
/// returns the SURE minimiser capped at the universal threshold.
pub fn sure_threshold(band: &[f64], sigma: f64) -> Result<f64> {
    check_sigma_nonneg(sigma)?;
    if band.is_empty() {
        return Err(Error::EmptyInput);
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let n = band.len();
    let x: Vec<f64> = band.iter().map(|v| v / sigma).collect();
    let universal = (2.0 * (n as f64).ln()).sqrt();
    let energy = x.iter().map(|v| v * v - 1.0).sum::<f64>() / n as f64;
    let sparsity = (n as f64).log2().powf(1.5) / (n as f64).sqrt();
    if energy <= sparsity {
        return Ok(sigma * universal);
    }
    Ok(sigma * sure_min_threshold(&x).min(universal))
}

/// BayesShrink threshold `σ² / σ̂_x`, `σ̂_x = √max(mean(band²) − σ², 0)`.
/// A band whose energy does not exceed the noise is removed entirely by
/// returning `max|band|`.
pub fn bayes_threshold(band: &[f64], sigma: f64) -> Result<f64> {
    check_sigma_nonneg(sigma)?;
    if band.is_empty() {
        return Err(Error::EmptyInput);
    }
    let second_moment = band.iter().map(|v| v * v).sum::<f64>() / band.len() as f64;
    let signal_sd = (second_moment - sigma * sigma).max(0.0).sqrt();
    if signal_sd == 0.0 {
        return Ok(band.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    }
    Ok(sigma * sigma / signal_sd)
}

/// Haar pipeline with a baseline threshold in place of noise invalidation.
///
/// Only `levels`, `noise` and `scope` of `config` are consulted.
pub fn denoise_with(
    method: Baseline,
    observed: &[f64],
    config: &DenoiseConfig,
) -> Result<DenoiseResult> {
    config.validate()?;
    let mut coeffs = dwt_forward(observed, config.levels)?;
    let sigma = config.sigma_for(&coeffs)?;
    if sigma_negligible(sigma, &coeffs) {
        return Ok(passthrough(observed, &coeffs, sigma));
    }
    let band_threshold = |band: &[f64]| -> Result<f64> {
        match method {
            Baseline::Visu => visu_threshold(observed.len(), sigma),
            Baseline::Sure => sure_threshold(band, sigma),
            Baseline::Bayes => bayes_threshold(band, sigma),
        }
    };
    let mut level_thresholds = Vec::with_capacity(coeffs.levels());
    let mut kept = 0;
    for band in &mut coeffs.detail_bands {
        let t = band_threshold(band)?;
        for c in band.iter_mut() {
            *c = shrink(*c, t);
            kept += (*c != 0.0) as usize;
        }
        level_thresholds.push(t);
    }
    if config.scope == ThresholdScope::AllCoefficients {
        let t = band_threshold(&coeffs.approx_band)?;
        for c in coeffs.approx_band.iter_mut() {
            *c = shrink(*c, t);
            kept += (*c != 0.0) as usize;
        }
    }
    Ok(DenoiseResult {
        threshold: level_thresholds.first().copied().unwrap_or(0.0),
        level_thresholds,
        denoised: dwt_inverse(&coeffs)?,
        coefficients_kept: kept,
        band: None,
        sigma_used: sigma,
    })
}
