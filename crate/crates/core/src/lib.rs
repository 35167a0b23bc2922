//! Noise invalidation denoising.
//!
//! Additive Gaussian noise leaves a tight fingerprint in the order statistics
//! of its absolute values: the fraction of noise coefficients below `z`
//! concentrates around `F(z) = 2φ(z/σ) − 1` with variance `F(1 − F)/N`.
//! The denoiser builds a confidence band around that curve, sorts the
//! observed wavelet coefficients by magnitude and picks the soft threshold
//! at the point where the observed curve leaves the noise band.
//!
//! Module map:
//!
//! - [`gaussian_stats`]: error function, normal CDF and the `F` / `H` curves.
//! - [`signature`]: empirical sorted curves, white and colored confidence bands.
//! - [`wavelet`]: orthonormal multilevel Haar transform.
//! - [`noise_model`]: white / AR(1) / MA noise, SNR calibration, MAD.
//! - [`nide`]: threshold selection and the denoising pipeline.
//! - [`baselines`]: VisuShrink, SureShrink and BayesShrink.
//! - [`signals`]: the classic Blocks / Bumps / HeavySine / Doppler /
//!   QuadChirp / MishMash test signals.

pub mod baselines;
pub mod error;
pub mod gaussian_stats;
pub mod nide;
pub mod noise_model;
pub mod signals;
pub mod signature;
pub mod wavelet;

pub use error::{Error, Result};
pub use gaussian_stats::Probability;
pub use nide::{denoise, DenoiseConfig, DenoiseResult};
pub use noise_model::{NoiseKind, NoiseSpec};
pub use signals::{SignalName, TestSignal};
pub use signature::{ConfidenceBand, CorrelationProfile};
pub use wavelet::CoefficientSet;
