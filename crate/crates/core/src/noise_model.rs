//! Additive noise: generation, SNR calibration and robust scale estimation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::signature::{CorrelationProfile, LAG_TRUNCATION};

/// Consistency constant of the MAD estimator for Gaussian data.
pub const MAD_NORMALIZER: f64 = 0.6745;

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    White,
    /// First-order autoregression `x_t = a·x_{t−1} + e_t`, `|a| < 1`.
    Ar1(f64),
    /// Moving average `x_t = Σ_k taps[k]·e_{t−k}`.
    Ma(Vec<f64>),
}

impl NoiseKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseKind::White => Ok(()),
            NoiseKind::Ar1(a) if a.abs() < 1.0 => Ok(()),
            NoiseKind::Ar1(a) => Err(Error::InvalidNoiseSpec(format!(
                "AR(1) coefficient must satisfy |a| < 1, got {a}"
            ))),
            NoiseKind::Ma(taps) => {
                if taps.is_empty() || taps.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidNoiseSpec(
                        "MA taps must be finite and nonempty".into(),
                    ));
                }
                if taps.iter().all(|&t| t == 0.0) {
                    return Err(Error::InvalidNoiseSpec("MA taps are all zero".into()));
                }
                Ok(())
            }
        }
    }

    pub fn is_white(&self) -> bool {
        matches!(self, NoiseKind::White) || matches!(self, NoiseKind::Ma(t) if t.len() == 1)
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseKind::White => write!(f, "white"),
            NoiseKind::Ar1(a) => write!(f, "ar1:{a}"),
            NoiseKind::Ma(taps) => {
                write!(f, "ma:")?;
                for (i, t) in taps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    /// Parses `white`, `ar1:<a>` or `ma:<t0>,<t1>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidNoiseSpec(s.to_string());
        let kind = if s.eq_ignore_ascii_case("white") {
            NoiseKind::White
        } else if let Some(rest) = s.strip_prefix("ar1:") {
            NoiseKind::Ar1(rest.trim().parse().map_err(|_| bad())?)
        } else if let Some(rest) = s.strip_prefix("ma:") {
            let taps = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            NoiseKind::Ma(taps)
        } else {
            return Err(bad());
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Noise process with stationary marginal standard deviation `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, sigma: f64) -> Result<Self> {
        let spec = Self { kind, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn white(sigma: f64) -> Self {
        Self {
            kind: NoiseKind::White,
            sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidSigma(self.sigma));
        }
        self.kind.validate()
    }
}

/// Deterministic noise vector for `(spec, n, seed)`.
pub fn gen_noise(spec: &NoiseSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_noise_with(spec, n, &mut rng)
}

/// Draws `n` samples of the process from `rng`.
///
/// AR(1) starts from its stationary distribution; MA output is scaled by
/// `1/‖taps‖` so the marginal variance is exactly `σ²`.
pub fn gen_noise_with<R: Rng + ?Sized>(
    spec: &NoiseSpec,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidLength);
    }
    let sigma = spec.sigma;
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    let out = match &spec.kind {
        NoiseKind::White => (0..n).map(|_| sigma * normal()).collect(),
        NoiseKind::Ar1(a) => {
            let innov = (1.0 - a * a).sqrt();
            let mut x = normal();
            let mut out = Vec::with_capacity(n);
            out.push(sigma * x);
            for _ in 1..n {
                x = a * x + innov * normal();
                out.push(sigma * x);
            }
            out
        }
        NoiseKind::Ma(taps) => {
            let norm = taps.iter().map(|t| t * t).sum::<f64>().sqrt();
            let q = taps.len() - 1;
            let e: Vec<f64> = (0..n + q).map(|_| normal()).collect();
            (0..n)
                .map(|t| {
                    let s: f64 = taps
                        .iter()
                        .enumerate()
                        .map(|(k, tap)| tap * e[t + q - k])
                        .sum();
                    sigma * s / norm
                })
                .collect()
        }
    };
    Ok(out)
}

/// Normalised autocorrelation of the process for lags `0..=max_lag`.
pub fn theoretical_profile(spec: &NoiseSpec, max_lag: usize) -> Result<CorrelationProfile> {
    spec.validate()?;
    let rho = match &spec.kind {
        NoiseKind::White => (0..=max_lag)
            .map(|k| if k == 0 { 1.0 } else { 0.0 })
            .collect(),
        NoiseKind::Ar1(a) => (0..=max_lag).map(|k| a.powi(k as i32)).collect(),
        NoiseKind::Ma(taps) => {
            let r0: f64 = taps.iter().map(|t| t * t).sum();
            (0..=max_lag)
                .map(|k| {
                    if k >= taps.len() {
                        0.0
                    } else {
                        taps.iter().zip(&taps[k..]).map(|(a, b)| a * b).sum::<f64>() / r0
                    }
                })
                .collect()
        }
    };
    CorrelationProfile::new(rho)
}

/// Scales `noise` so that `10·log10(‖signal‖² / ‖scaled‖²) = snr_db`.
pub fn calibrate_noise_to_snr(signal: &[f64], noise: &[f64], snr_db: f64) -> Result<Vec<f64>> {
    if signal.len() != noise.len() {
        return Err(Error::LengthMismatch {
            left: signal.len(),
            right: noise.len(),
        });
    }
    let scale = snr_scale(signal, noise, snr_db)?;
    Ok(noise.iter().map(|v| v * scale).collect())
}

/// The factor applied by [`calibrate_noise_to_snr`].
pub fn snr_scale(signal: &[f64], noise: &[f64], snr_db: f64) -> Result<f64> {
    let es: f64 = signal.iter().map(|v| v * v).sum();
    let en: f64 = noise.iter().map(|v| v * v).sum();
    if es <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    if en <= 0.0 {
        return Err(Error::InvalidNoiseSpec(
            "noise vector has zero energy".into(),
        ));
    }
    Ok((es / (en * 10f64.powf(snr_db / 10.0))).sqrt())
}

/// Median; even lengths average the two central order statistics.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (_, &mut upper, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    if values.len() % 2 == 1 {
        Ok(upper)
    } else {
        let lower = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(0.5 * (lower + upper))
    }
}

/// `σ̂ = median(|d|) / 0.6745` over the finest detail band.
pub fn estimate_sigma_mad(finest_detail: &[f64]) -> Result<f64> {
    let abs: Vec<f64> = finest_detail.iter().map(|v| v.abs()).collect();
    Ok(median(&abs)? / MAD_NORMALIZER)
}

/// Biased sample autocorrelation (mean removed) normalised by lag zero.
pub fn estimate_profile(noise_like: &[f64], max_lag: usize) -> Result<CorrelationProfile> {
    if noise_like.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = noise_like.len();
    let mean = noise_like.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = noise_like.iter().map(|v| v - mean).collect();
    let r0: f64 = x.iter().map(|v| v * v).sum();
    if r0 <= 0.0 {
        return Ok(CorrelationProfile::white());
    }
    let rho = (0..=max_lag.min(n - 1))
        .map(|k| {
            let rk: f64 = x.iter().zip(&x[k..]).map(|(a, b)| a * b).sum();
            (rk / r0).clamp(-1.0, 1.0)
        })
        .collect();
    CorrelationProfile::new(rho)
}

/// Noise statistics of one Haar band.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelNoise {
    /// Coefficient variance relative to the time-domain `σ²`.
    pub variance: f64,
    /// Normalised autocorrelation between coefficients of the band.
    pub profile: CorrelationProfile,
}

/// Noise statistics of every band of a Haar decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarNoise {
    /// Finest detail band first.
    pub details: Vec<LevelNoise>,
    pub approx: LevelNoise,
}

/// Maps a time-domain correlation profile through the Haar analysis filters.
///
/// A level-`j` coefficient is the inner product of the input with a filter
/// of length `2^j` and entries `±2^{−j/2}` (half `+`, half `−` for details,
/// all `+` for the approximation), taken at stride `2^j`. With `a(d)` the
/// filter autocorrelation,
/// `cov(c[k], c[k + l]) = σ² Σ_d a(d)·ρ(|2^j·l + d|)`.
/// Coefficient lags run up to the band length of a signal of length `n`,
/// with trailing lags below [`LAG_TRUNCATION`] dropped.
/// `profile` should hold every time lag that matters; missing lags count
/// as zero.
pub fn haar_noise(profile: &CorrelationProfile, levels: usize, n: usize) -> Result<HaarNoise> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NonDyadicLength(n));
    }
    if levels > n.trailing_zeros() as usize {
        return Err(Error::TooManyLevels { levels, len: n });
    }
    let details = (1..=levels)
        .map(|j| filtered_noise(profile, j, n, |m, half| if m < half { 1.0 } else { -1.0 }))
        .collect::<Result<Vec<_>>>()?;
    let approx = filtered_noise(profile, levels, n, |_, _| 1.0)?;
    Ok(HaarNoise { details, approx })
}

fn filtered_noise(
    profile: &CorrelationProfile,
    level: usize,
    n: usize,
    sign: impl Fn(usize, usize) -> f64,
) -> Result<LevelNoise> {
    let width = 1usize << level;
    let half = width / 2;
    let acf: Vec<f64> = (0..width)
        .map(|d| {
            (0..width - d)
                .map(|m| sign(m, half) * sign(m + d, half))
                .sum()
        })
        .collect();
    let scale = 1.0 / width as f64;
    let cov = |l: usize| -> f64 {
        let centre = l * width;
        let mut s = acf[0] * profile.lag(centre);
        for (d, &a) in acf.iter().enumerate().skip(1) {
            s += a * (profile.lag(centre + d) + profile.lag(centre.abs_diff(d)));
        }
        s * scale
    };
    let variance = cov(0);
    if !(variance > 0.0) {
        return Err(Error::InvalidNoiseSpec(format!(
            "level {level} carries no noise variance"
        )));
    }
    let mut rho: Vec<f64> = (0..(n >> level))
        .map(|l| (cov(l) / variance).clamp(-1.0, 1.0))
        .collect();
    rho[0] = 1.0;
    while rho.len() > 1 && rho.last().is_some_and(|r| r.abs() < LAG_TRUNCATION) {
        rho.pop();
    }
    Ok(LevelNoise {
        variance,
        profile: CorrelationProfile::new(rho)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_var(x: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        (
            m,
            x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0),
        )
    }

    #[test]
    fn white_noise_moments() {
        let x = gen_noise(&NoiseSpec::white(1.0), 100_000, 7).unwrap();
        let (m, v) = mean_var(&x);
        assert!(m.abs() < 0.02);
        assert!((v - 1.0).abs() < 0.02);
    }

    #[test]
    fn ar1_lag_one_correlation() {
        let spec = NoiseSpec::new(NoiseKind::Ar1(0.8), 1.0).unwrap();
        let x = gen_noise(&spec, 100_000, 8).unwrap();
        let prof = estimate_profile(&x, 3).unwrap();
        assert!((prof.lag(1) - 0.8).abs() < 0.02, "{}", prof.lag(1));
        let (_, v) = mean_var(&x);
        assert!((v - 1.0).abs() < 0.05);
    }

    #[test]
    fn ma_marginal_variance() {
        let spec = NoiseSpec::new(NoiseKind::Ma(vec![1.0, 1.0]), 2.0).unwrap();
        let x = gen_noise(&spec, 100_000, 9).unwrap();
        let (_, v) = mean_var(&x);
        assert!((v / 4.0 - 1.0).abs() < 0.03);
        assert!((estimate_profile(&x, 2).unwrap().lag(1) - 0.5).abs() < 0.02);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let spec = NoiseSpec::new(NoiseKind::Ar1(0.5), 3.0).unwrap();
        assert_eq!(
            gen_noise(&spec, 512, 42).unwrap(),
            gen_noise(&spec, 512, 42).unwrap()
        );
        assert_ne!(
            gen_noise(&spec, 512, 42).unwrap(),
            gen_noise(&spec, 512, 43).unwrap()
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(NoiseSpec::new(NoiseKind::Ar1(1.0), 1.0).is_err());
        assert!(NoiseSpec::new(NoiseKind::White, 0.0).is_err());
        assert!(NoiseSpec::new(NoiseKind::Ma(vec![]), 1.0).is_err());
        assert!(gen_noise(&NoiseSpec::white(1.0), 0, 1).is_err());
    }

    #[test]
    fn profiles() {
        let w = theoretical_profile(&NoiseSpec::white(1.0), 5).unwrap();
        assert!((1..=5).all(|k| w.lag(k) == 0.0));
        let ar =
            theoretical_profile(&NoiseSpec::new(NoiseKind::Ar1(0.8), 1.0).unwrap(), 5).unwrap();
        assert!((ar.lag(3) - 0.512).abs() < 1e-15);
        // tap convolution oracle: [1,1] ⋆ [1,1] = [1,2,1] → ρ = [1, 1/2, 0]
        let ma = theoretical_profile(
            &NoiseSpec::new(NoiseKind::Ma(vec![1.0, 1.0]), 1.0).unwrap(),
            4,
        )
        .unwrap();
        assert_eq!(ma.lag(1), 0.5);
        assert!((2..=4).all(|k| ma.lag(k) == 0.0));
    }

    #[test]
    fn parse_and_display_kinds() {
        assert_eq!("white".parse::<NoiseKind>().unwrap(), NoiseKind::White);
        assert_eq!("ar1:0.8".parse::<NoiseKind>().unwrap(), NoiseKind::Ar1(0.8));
        assert_eq!(
            "ma:1,0.5".parse::<NoiseKind>().unwrap(),
            NoiseKind::Ma(vec![1.0, 0.5])
        );
        assert!("ar1:1.5".parse::<NoiseKind>().is_err());
        assert!("pink".parse::<NoiseKind>().is_err());
        for s in ["white", "ar1:0.8", "ma:1,0.5"] {
            assert_eq!(s.parse::<NoiseKind>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn snr_calibration() {
        let signal: Vec<f64> = (0..256).map(|i| (i as f64 * 0.1).sin() + 0.3).collect();
        let noise = gen_noise(&NoiseSpec::white(1.0), 256, 3).unwrap();
        let es: f64 = signal.iter().map(|v| v * v).sum();
        let zero_db = calibrate_noise_to_snr(&signal, &noise, 0.0).unwrap();
        let en: f64 = zero_db.iter().map(|v| v * v).sum();
        assert!((en - es).abs() < 1e-9 * es);

        let mut prev = f64::INFINITY;
        for snr in [-5.0, 0.0, 5.0, 20.0, 60.0] {
            let s = snr_scale(&signal, &noise, snr).unwrap();
            assert!(s < prev);
            prev = s;
        }

        // doubling the signal doubles the scaled noise norm
        let doubled: Vec<f64> = signal.iter().map(|v| 2.0 * v).collect();
        let a = snr_scale(&signal, &noise, 4.0).unwrap();
        let b = snr_scale(&doubled, &noise, 4.0).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);

        assert_eq!(
            calibrate_noise_to_snr(&[0.0; 4], &[1.0; 4], 3.0),
            Err(Error::ZeroEnergy)
        );
        assert!(calibrate_noise_to_snr(&[1.0; 4], &[1.0; 3], 3.0).is_err());
    }

    #[test]
    fn mad_values() {
        assert!((estimate_sigma_mad(&[-2.0; 9]).unwrap() - 2.0 / 0.6745).abs() < 1e-12);
        assert!((estimate_sigma_mad(&[-1.0, 0.0, 1.0]).unwrap() - 1.4826).abs() < 1e-4);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]).unwrap(), 2.5);
        assert_eq!(estimate_sigma_mad(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn mad_consistency_on_haar_noise() {
        let sigma = 2.3;
        let mut good = 0;
        // the finest band holds 2048 coefficients (signal length 4096)
        for seed in 0..500 {
            let x = gen_noise(&NoiseSpec::white(sigma), 4096, seed).unwrap();
            let finest: Vec<f64> = x
                .chunks_exact(2)
                .map(|p| (p[0] - p[1]) * std::f64::consts::FRAC_1_SQRT_2)
                .collect();
            let est = estimate_sigma_mad(&finest).unwrap();
            if (est / sigma - 1.0).abs() < 0.05 {
                good += 1;
            }
        }
        assert!(good >= 450, "{good} of 500");
    }

    #[test]
    fn white_profile_estimate_near_zero() {
        let n = 2048;
        let x = gen_noise(&NoiseSpec::white(1.0), n, 10).unwrap();
        let p = estimate_profile(&x, 10).unwrap();
        let tol = 5.0 / (n as f64).sqrt();
        assert!((1..=10).all(|k| p.lag(k).abs() < tol));
    }

    #[test]
    fn haar_noise_of_white_profile_is_white() {
        let h = haar_noise(&CorrelationProfile::white(), 5, 256).unwrap();
        for level in h.details.iter().chain([&h.approx]) {
            assert!((level.variance - 1.0).abs() < 1e-12);
            assert!(level.profile.is_white());
        }
        assert!(haar_noise(&CorrelationProfile::white(), 9, 256).is_err());
    }

    #[test]
    fn haar_noise_ar1_closed_form() {
        // d = (x0 − x1)/√2: var = 1 − a, cov(d_k, d_{k+1}) = (2a² − a − a³)/2
        let a: f64 = 0.8;
        let spec = NoiseSpec::new(NoiseKind::Ar1(a), 1.0).unwrap();
        let h = haar_noise(&theoretical_profile(&spec, 2048).unwrap(), 3, 2048).unwrap();
        assert!((h.details[0].variance - (1.0 - a)).abs() < 1e-12);
        let r1 = (2.0 * a * a - a - a.powi(3)) / 2.0 / (1.0 - a);
        assert!((h.details[0].profile.lag(1) - r1).abs() < 1e-12);
        // approximation of one pair: (1 + a)
        let h1 = haar_noise(&theoretical_profile(&spec, 2048).unwrap(), 1, 2048).unwrap();
        assert!((h1.approx.variance - (1.0 + a)).abs() < 1e-12);
    }

    #[test]
    fn haar_noise_matches_monte_carlo() {
        let spec = NoiseSpec::new(NoiseKind::Ma(vec![1.0, -0.4, 0.7]), 1.0).unwrap();
        let h = haar_noise(&theoretical_profile(&spec, 64).unwrap(), 3, 4096).unwrap();
        let mut var = [0.0; 3];
        let mut lag1 = [0.0; 3];
        let runs = 200;
        for seed in 0..runs {
            let x = gen_noise(&spec, 4096, 900 + seed).unwrap();
            let c = crate::wavelet::dwt_forward(&x, 3).unwrap();
            for (j, band) in c.detail_bands.iter().enumerate() {
                let m = band.len() as f64;
                var[j] += band.iter().map(|v| v * v).sum::<f64>() / m;
                lag1[j] += band.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / (m - 1.0);
            }
        }
        for j in 0..3 {
            let v = var[j] / runs as f64;
            let r = lag1[j] / runs as f64 / v;
            assert!(
                (v / h.details[j].variance - 1.0).abs() < 0.02,
                "level {j}: {v}"
            );
            assert!(
                (r - h.details[j].profile.lag(1)).abs() < 0.02,
                "level {j}: {r}"
            );
        }
    }
}
