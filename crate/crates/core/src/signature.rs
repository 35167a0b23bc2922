//! Noise signature: the sorted-absolute-value curve and its confidence band.
//!
//! For `N` noise samples the fraction with `|v| ≤ z` has mean `F(z)` and
//! variance `F(z)(1 − F(z))/N` when the samples are independent. The band
//! `F ± λ·sd` is the region the sorted noise curve stays in with per-`z`
//! probability `erf_std(λ/√2)`.
//!
//! For colored noise the mean is unchanged and the variance picks up a
//! pairwise term. Each pair `(i, j)` is rotated into the independent
//! components `(V_i ± V_j)/√2` with variances `σ²(1 ± ρ_ij)`; the square
//! `|V_i|, |V_j| ≤ z` sits inside the rotated square of half-side `√2·z`,
//! which gives the upper bound implemented by [`colored_variance_bound`].

use std::f64::consts::SQRT_2;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::gaussian_stats::{
    abs_cdf_unchecked, abs_sf_unchecked, erf_std, shifted_cdf_unchecked, Probability,
};

/// Lags whose correlation magnitude is below this are dropped from the
/// pairwise sum of the colored variance bound.
pub const LAG_TRUNCATION: f64 = 1e-6;

/// Counts `|samples[i]| ≤ z` and divides by `N`.
pub fn empirical_signature(z: f64, samples: &[f64]) -> Result<Probability> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = samples.iter().filter(|v| v.abs() <= z).count();
    Ok(Probability::clamped(m as f64 / samples.len() as f64))
}

/// Step-function representation of [`empirical_signature`]: ascending
/// absolute values with `g[m−1] = m/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedCurve {
    pub z: Vec<f64>,
    pub g: Vec<f64>,
}

impl SortedCurve {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

pub fn sorted_curve(samples: &[f64]) -> Result<SortedCurve> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let z = sorted_abs(samples);
    let n = z.len() as f64;
    let g = (1..=z.len()).map(|m| m as f64 / n).collect();
    Ok(SortedCurve { z, g })
}

pub(crate) fn sorted_abs(samples: &[f64]) -> Vec<f64> {
    let mut z: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    z.sort_by(f64::total_cmp);
    z
}

/// Normalised autocorrelation `ρ(k) = R_vv(k) / R_vv(0)`, `ρ(0) = 1`.
///
/// Lags past the end of the stored sequence are taken as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    rho: Vec<f64>,
}

impl CorrelationProfile {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        match rho.first() {
            None => return Err(Error::EmptyInput),
            Some(&r0) if (r0 - 1.0).abs() > 1e-12 => return Err(Error::ProfileNotNormalized(r0)),
            _ => {}
        }
        for (lag, &value) in rho.iter().enumerate() {
            if !(value.abs() <= 1.0) {
                return Err(Error::InvalidCorrelation { lag, value });
            }
        }
        let mut rho = rho;
        rho[0] = 1.0;
        Ok(Self { rho })
    }

    /// The delta profile of white noise.
    pub fn white() -> Self {
        Self { rho: vec![1.0] }
    }

    #[inline]
    pub fn lag(&self, k: usize) -> f64 {
        self.rho.get(k).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rho
    }

    /// Number of stored lags, including lag zero.
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when every stored lag beyond zero is below the truncation level.
    pub fn is_white(&self) -> bool {
        self.rho[1..].iter().all(|r| r.abs() < LAG_TRUNCATION)
    }
}

/// Pointwise confidence band `[L_N(z), U_N(z)]` around `F(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub z_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub center: Vec<f64>,
    pub upper: Vec<f64>,
    pub lambda: f64,
    pub n: usize,
    pub confidence: Probability,
}

impl ConfidenceBand {
    pub fn len(&self) -> usize {
        self.z_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_grid.is_empty()
    }

    /// Whether `g` lies inside the band at grid point `i`.
    #[inline]
    pub fn contains(&self, i: usize, g: f64) -> bool {
        self.lower[i] <= g && g <= self.upper[i]
    }

    /// Writes `z,lower,center,upper` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "z,lower,center,upper")?;
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{}",
                self.z_grid[i], self.lower[i], self.center[i], self.upper[i]
            )?;
        }
        Ok(())
    }
}

fn check_band_inputs(z_grid: &[f64], sigma: f64, n: usize, lambda: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    if n == 0 {
        return Err(Error::InvalidLength);
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidLambda {
            value: lambda,
            max: f64::INFINITY,
        });
    }
    if let Some(&z) = z_grid.iter().find(|z| !(**z >= 0.0)) {
        return Err(Error::InvalidZ(z));
    }
    Ok(())
}

fn assemble_band(
    z_grid: &[f64],
    sigma: f64,
    n: usize,
    lambda: f64,
    variance: impl Fn(f64) -> f64,
) -> ConfidenceBand {
    let mut lower = Vec::with_capacity(z_grid.len());
    let mut center = Vec::with_capacity(z_grid.len());
    let mut upper = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let f = abs_cdf_unchecked(z, sigma);
        let half = lambda * variance(z).max(0.0).sqrt();
        lower.push((f - half).clamp(0.0, 1.0));
        center.push(f);
        upper.push((f + half).clamp(0.0, 1.0));
    }
    ConfidenceBand {
        z_grid: z_grid.to_vec(),
        lower,
        center,
        upper,
        lambda,
        n,
        confidence: lambda_to_confidence(lambda),
    }
}

/// White-noise band: `F(z) ± λ·√(F(1 − F)/n)`, clamped to `[0, 1]`.
pub fn white_band(z_grid: &[f64], sigma: f64, n: usize, lambda: f64) -> Result<ConfidenceBand> {
    check_band_inputs(z_grid, sigma, n, lambda)?;
    Ok(assemble_band(z_grid, sigma, n, lambda, |z| {
        white_variance(z, sigma, n)
    }))
}

#[inline]
fn white_variance(z: f64, sigma: f64, n: usize) -> f64 {
    abs_cdf_unchecked(z, sigma) * abs_sf_unchecked(z, sigma) / n as f64
}

/// Two-sided Gaussian coverage of `±λ` standard deviations: `erf_std(λ/√2)`.
pub fn lambda_to_confidence(lambda: f64) -> Probability {
    Probability::clamped(erf_std(lambda.max(0.0) / SQRT_2))
}

/// Inverse of [`lambda_to_confidence`] by bisection.
pub fn confidence_to_lambda(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lambda_to_confidence(mid).get() < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Analytic mean and variance of the sorted noisy-coefficient curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyCurveStats {
    pub z_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Mean `(1/N)·Σ H(z, θ̄_i)` and variance `(1/N²)·Σ H(1 − H)` of the
/// fraction of `|θ̄_i + V_i| ≤ z` under white noise.
pub fn expected_noisy_curve(
    z_grid: &[f64],
    theta_bars: &[f64],
    sigma: f64,
) -> Result<NoisyCurveStats> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    if theta_bars.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&z) = z_grid.iter().find(|z| !(**z >= 0.0)) {
        return Err(Error::InvalidZ(z));
    }
    let n = theta_bars.len() as f64;
    let mut mean = Vec::with_capacity(z_grid.len());
    let mut variance = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let (mut s, mut v) = (0.0, 0.0);
        for &tb in theta_bars {
            let h = shifted_cdf_unchecked(z, tb, sigma);
            s += h;
            v += h * (1.0 - h);
        }
        mean.push(s / n);
        variance.push(v / (n * n));
    }
    Ok(NoisyCurveStats {
        z_grid: z_grid.to_vec(),
        mean,
        variance,
    })
}

/// `F(√2·z / √(1 ± ρ))` in survival form; a zero scale maps to `F = 1`.
#[inline]
fn rotated_sf(z: f64, sigma: f64, one_plus_minus_rho: f64) -> f64 {
    if one_plus_minus_rho <= 0.0 {
        return 0.0;
    }
    abs_sf_unchecked(SQRT_2 * z / one_plus_minus_rho.sqrt(), sigma)
}

/// Upper bound on `E[g(z,V_i) g(z,V_j)] − F²(z)` for a pair with correlation `ρ`,
/// `F(√2z/√(1+ρ))·F(√2z/√(1−ρ)) − F²(z)`.
///
/// Evaluated from survival probabilities so the difference keeps precision
/// where every factor is close to one.
fn pair_covariance_bound(z: f64, sigma: f64, rho: f64) -> f64 {
    let a = rotated_sf(z, sigma, 1.0 + rho);
    let b = rotated_sf(z, sigma, 1.0 - rho);
    let c = abs_sf_unchecked(z, sigma);
    (2.0 * c - a - b) + (a * b - c * c)
}

/// Upper bound on `var(g(z, V^N))` for stationary colored noise:
///
/// `(1/n)F(1 − F) + (1/n²) Σ_{i≠j} [F(√2z/√(1+ρ_ij)) F(√2z/√(1−ρ_ij)) − F²(z)]`.
///
/// Lag `k` occurs `2(n − k)` times among the ordered pairs. Lags with
/// `|ρ(k)| <` [`LAG_TRUNCATION`] are skipped.
pub fn colored_variance_bound(
    z: f64,
    sigma: f64,
    profile: &CorrelationProfile,
    n: usize,
) -> Result<f64> {
    check_band_inputs(&[z], sigma, n, 0.0)?;
    Ok(colored_variance_unchecked(z, sigma, profile, n))
}

fn colored_variance_unchecked(z: f64, sigma: f64, profile: &CorrelationProfile, n: usize) -> f64 {
    let nf = n as f64;
    let white = white_variance(z, sigma, n);
    let max_lag = profile.len().min(n);
    let mut cross = 0.0;
    for k in 1..max_lag {
        let rho = profile.lag(k);
        if rho.abs() < LAG_TRUNCATION {
            continue;
        }
        cross += 2.0 * (n - k) as f64 * pair_covariance_bound(z, sigma, rho);
    }
    white + cross / (nf * nf)
}

/// Colored-noise band: same center `F(z)`, half-width `λ·√(colored_variance_bound)`.
pub fn colored_band(
    z_grid: &[f64],
    sigma: f64,
    profile: &CorrelationProfile,
    n: usize,
    lambda: f64,
) -> Result<ConfidenceBand> {
    check_band_inputs(z_grid, sigma, n, lambda)?;
    Ok(assemble_band(z_grid, sigma, n, lambda, |z| {
        colored_variance_unchecked(z, sigma, profile, n)
    }))
}

/// Upper bound on `cov(g(z,Θ_i), g(z,Θ_j))` for noisy coefficients with
/// noise-free means `θ̄_i, θ̄_j` and noise correlation `ρ`:
///
/// `H(√2z/√(1+ρ), (θ̄_i+θ̄_j)/√(2(1+ρ))) · H(√2z/√(1−ρ), (θ̄_i−θ̄_j)/√(2(1−ρ))) − H(z,θ̄_i)H(z,θ̄_j)`.
pub fn colored_noisy_covariance_bound(
    z: f64,
    theta_i: f64,
    theta_j: f64,
    rho: f64,
    sigma: f64,
) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    if !(z >= 0.0) {
        return Err(Error::InvalidZ(z));
    }
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidCorrelation { lag: 1, value: rho });
    }
    let plus = 1.0 + rho;
    let minus = 1.0 - rho;
    let joint = shifted_cdf_unchecked(
        SQRT_2 * z / plus.sqrt(),
        (theta_i + theta_j) / (2.0 * plus).sqrt(),
        sigma,
    ) * shifted_cdf_unchecked(
        SQRT_2 * z / minus.sqrt(),
        (theta_i - theta_j) / (2.0 * minus).sqrt(),
        sigma,
    );
    Ok(joint - shifted_cdf_unchecked(z, theta_i, sigma) * shifted_cdf_unchecked(z, theta_j, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_stats::abs_noise_cdf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn grid(hi: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| hi * i as f64 / (points - 1) as f64)
            .collect()
    }

    fn ar1_profile(a: f64, lags: usize) -> CorrelationProfile {
        CorrelationProfile::new((0..lags).map(|k| a.powi(k as i32)).collect()).unwrap()
    }

    fn ar1_noise(rng: &mut ChaCha8Rng, a: f64, n: usize) -> Vec<f64> {
        let innov = (1.0 - a * a).sqrt();
        let mut x: f64 = StandardNormal.sample(rng);
        let mut out = Vec::with_capacity(n);
        out.push(x);
        for _ in 1..n {
            let e: f64 = StandardNormal.sample(rng);
            x = a * x + innov * e;
            out.push(x);
        }
        out
    }

    #[test]
    fn empirical_signature_counts() {
        let s = [1.0, -2.0, 3.0];
        assert_eq!(empirical_signature(0.5, &s).unwrap().get(), 0.0);
        assert_eq!(empirical_signature(10.0, &s).unwrap().get(), 1.0);
        assert!((empirical_signature(2.0, &s).unwrap().get() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_signature(1.0, &[]), Err(Error::EmptyInput));
    }

    #[test]
    fn sorted_curve_steps() {
        let c = sorted_curve(&[3.0, -1.0]).unwrap();
        assert_eq!(c.z, vec![1.0, 3.0]);
        assert_eq!(c.g, vec![0.5, 1.0]);
        assert!(sorted_curve(&[]).is_err());
    }

    #[test]
    fn sorted_normal_curve_is_dense() {
        // 100 runs of 2048 standard normals: the maximum modulus rarely
        // exceeds 3.9 (expected exceedances per run ≈ 2048·9.6e-5 ≈ 0.2).
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut exceed = 0;
        for _ in 0..100 {
            let v: Vec<f64> = (0..2048).map(|_| StandardNormal.sample(&mut rng)).collect();
            let c = sorted_curve(&v).unwrap();
            assert!(c.g.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(*c.g.last().unwrap(), 1.0);
            if *c.z.last().unwrap() > 3.9 {
                exceed += 1;
            }
        }
        assert!(exceed < 40, "{exceed} runs exceeded 3.9σ");
    }

    #[test]
    fn degenerate_band_at_lambda_zero() {
        let z = grid(8.0, 30);
        let band = white_band(&z, 2.0, 100, 0.0).unwrap();
        assert_eq!(band.lower, band.center);
        assert_eq!(band.upper, band.center);
    }

    #[test]
    fn white_half_width_at_median() {
        // F(z) = 0.5 at z = σ·√2·erfinv(0.5) ≈ 0.6744898σ; find it by bisection.
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if abs_noise_cdf(mid, 1.0).unwrap().get() < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let band = white_band(&[lo], 1.0, 2048, 4.5).unwrap();
        let half = band.upper[0] - band.center[0];
        assert!((half - 4.5 * (0.25f64 / 2048.0).sqrt()).abs() < 1e-9);
        // 4.5·√(0.25/2048) = 0.0497184
        assert!((half - 0.049715).abs() < 5e-6);
    }

    #[test]
    fn band_invariants() {
        let z = grid(12.0, 200);
        let band = white_band(&z, 2.5, 2048, 4.5).unwrap();
        for i in 0..band.len() {
            assert!(band.lower[i] <= band.center[i] && band.center[i] <= band.upper[i]);
            assert!(band.lower[i] >= 0.0 && band.upper[i] <= 1.0);
        }
        assert!(band.center.windows(2).all(|w| w[0] <= w[1]));
        assert!((band.confidence.get() - 0.999997).abs() < 5e-6);
    }

    #[test]
    fn band_rejects_bad_inputs() {
        assert!(white_band(&[1.0], 0.0, 10, 3.0).is_err());
        assert!(white_band(&[1.0], 1.0, 0, 3.0).is_err());
        assert!(white_band(&[-1.0], 1.0, 10, 3.0).is_err());
        assert!(white_band(&[1.0], 1.0, 10, -3.0).is_err());
    }

    #[test]
    fn lambda_confidence_values() {
        // two-sided 4.5σ coverage is 0.9999932; 0.999997 is the one-sided
        // Φ(4.5) rounded, so only agreement to 5e-6 is asserted
        assert!((lambda_to_confidence(4.5).get() - 0.9999932046537505).abs() < 1e-12);
        assert!((lambda_to_confidence(4.5).get() - 0.999997).abs() < 5e-6);
        assert!((lambda_to_confidence(3.0).get() - 0.997300203937).abs() < 1e-12);
        for i in 0..=50 {
            let x = 1.0 + 5.0 * i as f64 / 50.0;
            let back = confidence_to_lambda(lambda_to_confidence(x).get()).unwrap();
            assert!((back - x).abs() < 1e-8, "{x} → {back}");
        }
        assert!(confidence_to_lambda(1.0).is_err());
        assert!(confidence_to_lambda(0.0).is_err());
    }

    #[test]
    fn noisy_curve_reduces_to_noise_statistics() {
        let z = grid(6.0, 40);
        let stats = expected_noisy_curve(&z, &vec![0.0; 512], 1.5).unwrap();
        for (i, &zi) in z.iter().enumerate() {
            let f = abs_noise_cdf(zi, 1.5).unwrap().get();
            assert!((stats.mean[i] - f).abs() < 1e-13);
            assert!((stats.variance[i] - f * (1.0 - f) / 512.0).abs() < 1e-15);
        }
        let theta: Vec<f64> = (0..300).map(|i| (i as f64 * 0.37).sin() * 9.0).collect();
        let stats = expected_noisy_curve(&z, &theta, 1.0).unwrap();
        for v in stats.variance {
            assert!(v <= 0.25 / 300.0 + 1e-18);
        }
    }

    #[test]
    fn white_profile_gives_white_variance() {
        let prof = CorrelationProfile::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        for z in grid(6.0, 25) {
            let f = abs_noise_cdf(z, 1.2).unwrap().get();
            let b = colored_variance_bound(z, 1.2, &prof, 1000).unwrap();
            assert!((b - f * (1.0 - f) / 1000.0).abs() < 1e-15, "z={z}");
        }
        let band_w = white_band(&grid(5.0, 30), 1.2, 1000, 4.5).unwrap();
        let band_c = colored_band(&grid(5.0, 30), 1.2, &prof, 1000, 4.5).unwrap();
        for i in 0..band_w.len() {
            assert!((band_w.lower[i] - band_c.lower[i]).abs() < 1e-15);
            assert!((band_w.upper[i] - band_c.upper[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn colored_bound_dominates_white_for_positive_correlation() {
        let prof = ar1_profile(0.8, 200);
        let wide = colored_band(&grid(5.0, 50), 1.0, &prof, 1024, 4.5).unwrap();
        let narrow = white_band(&grid(5.0, 50), 1.0, 1024, 4.5).unwrap();
        for z in grid(5.0, 50) {
            let f = abs_noise_cdf(z, 1.0).unwrap().get();
            let b = colored_variance_bound(z, 1.0, &prof, 1024).unwrap();
            assert!(b >= f * (1.0 - f) / 1024.0);
        }
        for i in 0..wide.len() {
            assert!(wide.lower[i] <= narrow.lower[i]);
            assert!(wide.upper[i] >= narrow.upper[i]);
        }
    }

    #[test]
    fn colored_bound_handles_unit_correlation() {
        let prof = CorrelationProfile::new(vec![1.0, 1.0, -1.0]).unwrap();
        let b = colored_variance_bound(1.0, 1.0, &prof, 16).unwrap();
        assert!(b.is_finite() && b > 0.0);
        assert!(CorrelationProfile::new(vec![1.0, 1.2]).is_err());
        assert!(CorrelationProfile::new(vec![0.9, 0.1]).is_err());
    }

    #[test]
    fn colored_bound_exceeds_monte_carlo_variance() {
        // AR(1) a = 0.8, n = 1024, z = σ, 2000 seeds
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let runs = 2000;
        let vals: Vec<f64> = (0..runs)
            .map(|_| {
                empirical_signature(1.0, &ar1_noise(&mut rng, 0.8, 1024))
                    .unwrap()
                    .get()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / runs as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let bound = colored_variance_bound(1.0, 1.0, &ar1_profile(0.8, 1024), 1024).unwrap();
        assert!(var <= bound, "MC {var} vs bound {bound}");
    }

    #[test]
    fn noisy_covariance_bound_specialisations() {
        for z in grid(5.0, 21) {
            let b = colored_noisy_covariance_bound(z, 0.0, 0.0, 0.0, 1.0).unwrap();
            assert!(b >= -1e-15);
            // zero shifts reproduce the noise-only pair term
            for &rho in &[0.3, -0.6, 0.95] {
                let noisy = colored_noisy_covariance_bound(z, 0.0, 0.0, rho, 1.3).unwrap();
                let noise = pair_covariance_bound(z, 1.3, rho);
                assert!((noisy - noise).abs() < 1e-13, "z={z} rho={rho}");
            }
        }
        assert!(colored_noisy_covariance_bound(1.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(colored_noisy_covariance_bound(1.0, 0.0, 0.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn noisy_covariance_bound_exceeds_monte_carlo() {
        let (rho, sigma, z, ti, tj) = (0.5, 1.0, 1.0, 2.0, -2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let draws = 100_000;
        let c = (1.0f64 - rho * rho).sqrt();
        let (mut si, mut sj, mut sij) = (0.0, 0.0, 0.0);
        for _ in 0..draws {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            let vi = sigma * a;
            let vj = sigma * (rho * a + c * b);
            let gi = ((vi + ti).abs() <= z) as u8 as f64;
            let gj = ((vj + tj).abs() <= z) as u8 as f64;
            si += gi;
            sj += gj;
            sij += gi * gj;
        }
        let n = draws as f64;
        let cov = sij / n - (si / n) * (sj / n);
        let bound = colored_noisy_covariance_bound(z, ti, tj, rho, sigma).unwrap();
        assert!(cov <= bound, "MC {cov} vs bound {bound}");
    }

    #[test]
    fn band_csv_layout() {
        let band = white_band(&[0.0, 1.0], 1.0, 4, 3.0).unwrap();
        let mut buf = Vec::new();
        band.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "z,lower,center,upper");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0,0,0,0");
    }
}
