//! Threshold selection by noise invalidation, and the denoising pipeline.
//!
//! The sorted absolute coefficients `a_(1) ≤ … ≤ a_(N)` trace the curve
//! `ĝ(a_(m)) = m/N`. While that curve stays inside the noise band the
//! coefficients are indistinguishable from noise; the threshold is the last
//! sorted value at which the curve is still inside the band.

use crate::error::{Error, Result};
use crate::noise_model::{estimate_sigma_mad, haar_noise, HaarNoise};
use crate::signature::{colored_band, sorted_abs, white_band, ConfidenceBand, CorrelationProfile};
use crate::wavelet::{dwt_forward, dwt_inverse, CoefficientSet};

/// Largest accepted band multiplier.
pub const MAX_LAMBDA: f64 = 8.0;

/// Relative level below which an estimated σ is treated as zero.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// `sgn(θ)·(|θ| − t)` for `|θ| ≥ t`, zero otherwise.
pub fn soft_threshold(coeffs: &[f64], t: f64) -> Result<Vec<f64>> {
    check_threshold(t)?;
    Ok(coeffs.iter().map(|&c| shrink(c, t)).collect())
}

#[inline]
pub(crate) fn shrink(c: f64, t: f64) -> f64 {
    let m = c.abs();
    if m >= t {
        (m - t).copysign(c)
    } else {
        0.0
    }
}

pub(crate) fn check_threshold(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(t))
    }
}

/// Which variance model the noise band uses.
///
/// In [`BandParams`] a colored profile is the correlation between the
/// coefficients being thresholded. In [`DenoiseConfig`] it is the
/// time-domain correlation of the additive noise, which [`denoise`] maps to
/// each Haar band.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum BandModel {
    #[default]
    White,
    /// Colored noise with the given normalised autocorrelation.
    Colored(CorrelationProfile),
}

/// Inputs of the noise band for one pool of coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BandParams {
    pub sigma: f64,
    pub lambda: f64,
    pub model: BandModel,
}

impl BandParams {
    pub fn white(sigma: f64, lambda: f64) -> Self {
        Self {
            sigma,
            lambda,
            model: BandModel::White,
        }
    }

    /// Band evaluated on `z_grid` for a pool of `n` coefficients.
    pub fn band(&self, z_grid: &[f64], n: usize) -> Result<ConfidenceBand> {
        match &self.model {
            BandModel::White => white_band(z_grid, self.sigma, n, self.lambda),
            BandModel::Colored(profile) => {
                colored_band(z_grid, self.sigma, profile, n, self.lambda)
            }
        }
    }
}

/// Full outcome of a threshold search, kept for traces and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSelection {
    pub threshold: f64,
    /// Sorted absolute coefficients; also the band grid.
    pub sorted: Vec<f64>,
    /// `ĝ` at each sorted value, `m/N`.
    pub empirical: Vec<f64>,
    pub band: ConfidenceBand,
    pub in_band: Vec<bool>,
}

impl ThresholdSelection {
    /// Number of coefficients strictly above the threshold.
    pub fn survivors(&self) -> usize {
        self.sorted.iter().filter(|&&a| a > self.threshold).count()
    }
}

/// Noise-invalidation threshold of `coeffs`.
///
/// Returns the largest `a_(m)` with `L_N(a_(m)) ≤ m/N ≤ U_N(a_(m))`, zero when
/// no point is in the band. The top order statistic always has `ĝ = 1` and
/// re-enters the clamped band whatever the data, so it takes the verdict of
/// its predecessor: a curve that is in the band up to `a_(N−1)` yields
/// `a_(N)` (every coefficient invalidated), while a curve that has already
/// departed stays departed.
pub fn select_threshold(coeffs: &[f64], params: &BandParams) -> Result<f64> {
    Ok(select_threshold_detailed(coeffs, params)?.threshold)
}

pub fn select_threshold_detailed(
    coeffs: &[f64],
    params: &BandParams,
) -> Result<ThresholdSelection> {
    if coeffs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(params.sigma > 0.0 && params.sigma.is_finite()) {
        return Err(Error::InvalidSigma(params.sigma));
    }
    let sorted = sorted_abs(coeffs);
    let n = sorted.len();
    let band = params.band(&sorted, n)?;
    let empirical: Vec<f64> = (1..=n).map(|m| m as f64 / n as f64).collect();
    let mut in_band: Vec<bool> = (0..n).map(|i| band.contains(i, empirical[i])).collect();
    if n >= 2 {
        in_band[n - 1] = in_band[n - 2];
    }
    let threshold = in_band.iter().rposition(|&b| b).map_or(0.0, |i| sorted[i]);
    Ok(ThresholdSelection {
        threshold,
        sorted,
        empirical,
        band,
        in_band,
    })
}

/// Where σ comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NoiseEstimate {
    Known(f64),
    /// `median(|finest detail|) / 0.6745`.
    #[default]
    Mad,
}

/// Which coefficients take part in threshold selection and shrinkage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdScope {
    #[default]
    DetailsOnly,
    AllCoefficients,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseConfig {
    pub levels: usize,
    pub lambda: f64,
    pub noise: NoiseEstimate,
    pub band: BandModel,
    pub scope: ThresholdScope,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            levels: 5,
            lambda: 4.5,
            noise: NoiseEstimate::Mad,
            band: BandModel::White,
            scope: ThresholdScope::DetailsOnly,
        }
    }
}

impl DenoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::TooManyLevels { levels: 0, len: 0 });
        }
        if !(0.0..=MAX_LAMBDA).contains(&self.lambda) {
            return Err(Error::InvalidLambda {
                value: self.lambda,
                max: MAX_LAMBDA,
            });
        }
        if let NoiseEstimate::Known(s) = self.noise {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidSigma(s));
            }
        }
        Ok(())
    }

    /// σ for the given transform: the known value or the MAD estimate.
    pub fn sigma_for(&self, coeffs: &CoefficientSet) -> Result<f64> {
        match self.noise {
            NoiseEstimate::Known(s) => Ok(s),
            NoiseEstimate::Mad => estimate_sigma_mad(coeffs.finest_detail()),
        }
    }

    /// Time-domain σ. Under a colored model the MAD estimate measures the
    /// finest band only and is rescaled by that band's relative variance.
    fn time_sigma(&self, coeffs: &CoefficientSet, noise: Option<&HaarNoise>) -> Result<f64> {
        let s = self.sigma_for(coeffs)?;
        match (self.noise, noise) {
            (NoiseEstimate::Mad, Some(h)) => Ok(s / h.details[0].variance.sqrt()),
            _ => Ok(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult {
    /// Global threshold; for level-dependent thresholds the finest level's.
    pub threshold: f64,
    /// Threshold applied to each detail level, finest first.
    pub level_thresholds: Vec<f64>,
    pub denoised: Vec<f64>,
    pub coefficients_kept: usize,
    /// Noise band used for selection, the finest level's when thresholds
    /// are level dependent; `None` for baselines and passthrough.
    pub band: Option<ConfidenceBand>,
    pub sigma_used: f64,
}

/// True when σ is negligible against the coefficients and thresholding
/// should be skipped.
pub(crate) fn sigma_negligible(sigma: f64, coeffs: &CoefficientSet) -> bool {
    let peak = coeffs
        .detail_bands
        .iter()
        .flatten()
        .chain(&coeffs.approx_band)
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    !(sigma > SIGMA_FLOOR * peak)
}

pub(crate) fn passthrough(observed: &[f64], coeffs: &CoefficientSet, sigma: f64) -> DenoiseResult {
    DenoiseResult {
        threshold: 0.0,
        level_thresholds: vec![0.0; coeffs.levels()],
        denoised: observed.to_vec(),
        coefficients_kept: coeffs.original_length,
        band: None,
        sigma_used: sigma,
    }
}

/// Haar analysis, σ, noise band, threshold, soft shrinkage, synthesis.
///
/// With a white band every coefficient in scope shares one threshold. With
/// a colored band the noise is no longer identically distributed across
/// levels, so each band gets its own σ, coefficient correlation and
/// threshold, derived from the time-domain profile by [`haar_noise`].
pub fn denoise(observed: &[f64], config: &DenoiseConfig) -> Result<DenoiseResult> {
    config.validate()?;
    let mut coeffs = dwt_forward(observed, config.levels)?;
    let noise = match &config.band {
        BandModel::White => None,
        BandModel::Colored(profile) => Some(haar_noise(profile, config.levels, observed.len())?),
    };
    let sigma = config.time_sigma(&coeffs, noise.as_ref())?;
    if sigma_negligible(sigma, &coeffs) {
        return Ok(passthrough(observed, &coeffs, sigma));
    }
    let Some(noise) = noise else {
        return denoise_pooled(coeffs, config, sigma);
    };
    let all = config.scope == ThresholdScope::AllCoefficients;
    let mut level_thresholds = Vec::with_capacity(coeffs.levels());
    let mut kept = 0;
    let mut finest_band = None;
    let bands = coeffs
        .detail_bands
        .iter_mut()
        .zip(&noise.details)
        .chain(all.then_some((&mut coeffs.approx_band, &noise.approx)));
    for (band, level) in bands {
        let params = BandParams {
            sigma: sigma * level.variance.sqrt(),
            lambda: config.lambda,
            model: BandModel::Colored(level.profile.clone()),
        };
        let selection = select_threshold_detailed(band, &params)?;
        let t = selection.threshold;
        band.iter_mut().for_each(|c| *c = shrink(*c, t));
        kept += selection.survivors();
        if level_thresholds.len() < config.levels {
            level_thresholds.push(t);
        }
        finest_band.get_or_insert(selection.band);
    }
    Ok(DenoiseResult {
        threshold: level_thresholds[0],
        level_thresholds,
        denoised: dwt_inverse(&coeffs)?,
        coefficients_kept: kept,
        band: finest_band,
        sigma_used: sigma,
    })
}

fn denoise_pooled(
    mut coeffs: CoefficientSet,
    config: &DenoiseConfig,
    sigma: f64,
) -> Result<DenoiseResult> {
    let params = BandParams::white(sigma, config.lambda);
    let pool = match config.scope {
        ThresholdScope::DetailsOnly => coeffs.details(),
        ThresholdScope::AllCoefficients => coeffs.flatten(),
    };
    let selection = select_threshold_detailed(&pool, &params)?;
    let t = selection.threshold;
    coeffs.map_details(|c| shrink(c, t));
    if config.scope == ThresholdScope::AllCoefficients {
        coeffs
            .approx_band
            .iter_mut()
            .for_each(|c| *c = shrink(*c, t));
    }
    Ok(DenoiseResult {
        threshold: t,
        level_thresholds: vec![t; coeffs.levels()],
        denoised: dwt_inverse(&coeffs)?,
        coefficients_kept: selection.survivors(),
        band: Some(selection.band),
        sigma_used: sigma,
    })
}
