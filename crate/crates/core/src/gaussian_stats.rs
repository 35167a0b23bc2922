//! Gaussian primitives and the two CDF-type curves used by the noise band.
//!
//! Two error-function conventions live side by side here. [`erf`] follows
//! the half-normalised form `(1/√π) ∫₀ˣ e^{−t²} dt`, whose range is
//! `(−1/2, 1/2)`; [`erf_std`] is the conventional `2/√π ∫₀ˣ e^{−t²} dt`.
//! Everything downstream is written in terms of [`erf_std`] / `erfc`.
//!
//! Tail quantities are evaluated through `erfc` so that survival
//! probabilities such as `1 − F(z)` keep full relative precision far into
//! the tail, where band edges at λ = 4.5 are decided.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// A probability value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Wraps `value`, rejecting anything outside `[0, 1]` (and NaN).
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    /// Wraps `value` after clamping it into `[0, 1]`.
    pub fn clamped(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 − p`.
    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Half-normalised error function `(1/√π) ∫₀ˣ e^{−t²} dt`, i.e. `erf_std(x) / 2`.
pub fn erf(x: f64) -> f64 {
    0.5 * erf_std(x)
}

/// Conventional error function `(2/√π) ∫₀ˣ e^{−t²} dt`.
pub fn erf_std(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary conventional error function `1 − erf_std(x)`.
pub fn erfc_std(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF `φ(x)`.
pub fn std_normal_cdf(x: f64) -> Probability {
    Probability::clamped(normal_cdf(x))
}

#[inline]
pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

#[inline]
fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

#[inline]
fn check_z(z: f64) -> Result<()> {
    if z >= 0.0 && !z.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidZ(z))
    }
}

/// CDF of `|V|` for `V ~ N(0, σ²)`: `F(z) = 2φ(z/σ) − 1`.
pub fn abs_noise_cdf(z: f64, sigma: f64) -> Result<Probability> {
    check_z(z)?;
    check_sigma(sigma)?;
    Ok(Probability::clamped(abs_cdf_unchecked(z, sigma)))
}

/// `1 − F(z)` computed without cancellation.
pub fn abs_noise_sf(z: f64, sigma: f64) -> Result<Probability> {
    check_z(z)?;
    check_sigma(sigma)?;
    Ok(Probability::clamped(abs_sf_unchecked(z, sigma)))
}

#[inline]
pub(crate) fn abs_cdf_unchecked(z: f64, sigma: f64) -> f64 {
    if z.is_infinite() {
        return 1.0;
    }
    libm::erf(z / (sigma * SQRT_2))
}

#[inline]
pub(crate) fn abs_sf_unchecked(z: f64, sigma: f64) -> f64 {
    if z.is_infinite() {
        return 0.0;
    }
    libm::erfc(z / (sigma * SQRT_2))
}

/// CDF of `|V + θ̄|` for `V ~ N(0, σ²)`:
/// `H(z, θ̄) = φ((z − θ̄)/σ) + φ((z + θ̄)/σ) − 1`.
///
/// Negative `z` is rejected; for `z = 0` the value is zero.
pub fn shifted_abs_cdf(z: f64, theta_bar: f64, sigma: f64) -> Result<Probability> {
    check_z(z)?;
    check_sigma(sigma)?;
    Ok(Probability::clamped(shifted_cdf_unchecked(
        z, theta_bar, sigma,
    )))
}

/// `H` written as `Pr(−z ≤ θ̄ + V ≤ z) = Φ((z−|θ̄|)/σ) − Φ((−z−|θ̄|)/σ)`, which
/// is algebraically the same expression but stays accurate when either term
/// is close to one.
#[inline]
pub(crate) fn shifted_cdf_unchecked(z: f64, theta_bar: f64, sigma: f64) -> f64 {
    if z.is_infinite() {
        return 1.0;
    }
    let shift = theta_bar.abs();
    let hi = (z - shift) / sigma;
    let lo = (-z - shift) / sigma;
    if hi > 0.0 {
        // both excluded tails are small; subtract them from one
        let upper_tail = normal_cdf(-hi);
        let lower_tail = normal_cdf(lo);
        (1.0 - upper_tail - lower_tail).clamp(0.0, 1.0)
    } else {
        (normal_cdf(hi) - normal_cdf(lo)).clamp(0.0, 1.0)
    }
}
