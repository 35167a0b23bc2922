//! Monte Carlo checks of the analytic signature statistics.
//!
//! Each check draws `runs` independent noise vectors, evaluates the averaged
//! signature at a set of `z` values, and compares the sample mean and
//! variance across runs with the closed forms in `nide_core::signature`.

use std::fmt;
use std::str::FromStr;

use nide_core::gaussian_stats::abs_noise_cdf;
use nide_core::noise_model::{gen_noise_with, theoretical_profile};
use nide_core::signature::{colored_variance_bound, expected_noisy_curve, white_band};
use nide_core::{NoiseKind, NoiseSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::experiment::trial_rng;

/// Mean tolerance in standard errors.
pub const MEAN_SE_TOLERANCE: f64 = 5.0;
/// Relative variance tolerance.
pub const VARIANCE_REL_TOLERANCE: f64 = 0.20;
/// Minimum per-z coverage asserted by the coverage check.
pub const COVERAGE_FLOOR: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Formula {
    /// Generic bounded signature, white noise.
    AppendixA,
    /// Indicator signature (sorted absolute noise), white noise.
    AppendixB,
    /// Indicator signature of noisy coefficients with fixed means.
    AppendixC,
    /// Indicator signature under AR(1) noise against the colored bound.
    AppendixD,
    /// Per-z coverage of the white band.
    Coverage,
}

impl Formula {
    pub const ALL: [Formula; 5] = [
        Formula::AppendixA,
        Formula::AppendixB,
        Formula::AppendixC,
        Formula::AppendixD,
        Formula::Coverage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Formula::AppendixA => "appendixA",
            Formula::AppendixB => "appendixB",
            Formula::AppendixC => "appendixC",
            Formula::AppendixD => "appendixD",
            Formula::Coverage => "coverage",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Formula {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BenchError::Config(format!("unknown formula {s:?}")))
    }
}

/// Signature function used by the generic check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignatureKind {
    /// `1{|v| ≤ z}`.
    Indicator,
    /// `exp(−v²/(2z²))`, with mean `z/√(z² + σ²)` and second moment
    /// `z/√(z² + 2σ²)`.
    #[default]
    GaussianKernel,
}

impl SignatureKind {
    fn eval(self, z: f64, v: f64) -> f64 {
        match self {
            SignatureKind::Indicator => (v.abs() <= z) as u8 as f64,
            SignatureKind::GaussianKernel => (-v * v / (2.0 * z * z)).exp(),
        }
    }

    /// Mean and variance of `g(z, V)` for `V ~ N(0, σ²)`.
    fn moments(self, z: f64, sigma: f64) -> Result<(f64, f64)> {
        Ok(match self {
            SignatureKind::Indicator => {
                let f = abs_noise_cdf(z, sigma)?.get();
                (f, f * (1.0 - f))
            }
            SignatureKind::GaussianKernel => {
                let m1 = z / (z * z + sigma * sigma).sqrt();
                let m2 = z / (z * z + 2.0 * sigma * sigma).sqrt();
                (m1, m2 - m1 * m1)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McParams {
    pub n: usize,
    pub sigma: f64,
    pub z_grid: Vec<f64>,
    pub signature: SignatureKind,
    /// AR(1) coefficient for the colored check.
    pub ar1: f64,
    pub lambda: f64,
    /// Noise-free means for the noisy-data check, cycled to length `n`.
    pub theta_bars: Vec<f64>,
}

impl McParams {
    /// Settings of the reference runs for `formula`.
    pub fn defaults(formula: Formula) -> Self {
        let sigma = 1.0;
        let uniform = |points: usize, hi: f64, include_zero: bool| -> Vec<f64> {
            let start = if include_zero { 0 } else { 1 };
            let denom = if include_zero { points - 1 } else { points };
            (start..start + points)
                .map(|i| hi * i as f64 / denom as f64)
                .collect()
        };
        let base = Self {
            n: 2048,
            sigma,
            z_grid: vec![0.5, 1.0, 1.5, 2.0, 3.0],
            signature: SignatureKind::GaussianKernel,
            ar1: 0.8,
            lambda: 4.5,
            theta_bars: vec![0.0, 0.0, 0.5, -1.0, 0.0, 2.0, 0.0, -4.0],
        };
        match formula {
            Formula::AppendixA => base,
            Formula::AppendixB => Self {
                signature: SignatureKind::Indicator,
                ..base
            },
            Formula::AppendixC => Self {
                signature: SignatureKind::Indicator,
                ..base
            },
            Formula::AppendixD => Self {
                n: 1024,
                z_grid: uniform(50, 4.0 * sigma, false),
                signature: SignatureKind::Indicator,
                ..base
            },
            Formula::Coverage => Self {
                z_grid: uniform(30, 4.0 * sigma, true),
                signature: SignatureKind::Indicator,
                ..base
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(BenchError::Config("n must be at least 2".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(nide_core::Error::InvalidSigma(self.sigma).into());
        }
        if self.z_grid.is_empty() || self.z_grid.iter().any(|z| !(*z >= 0.0)) {
            return Err(BenchError::Config(
                "z grid must be non-empty and non-negative".into(),
            ));
        }
        if self.signature == SignatureKind::GaussianKernel && self.z_grid.contains(&0.0) {
            return Err(BenchError::Config("the Gaussian kernel needs z > 0".into()));
        }
        Ok(())
    }
}

/// One `z` of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCheck {
    pub quantity: &'static str,
    pub z: f64,
    pub monte_carlo: f64,
    pub analytic: f64,
    /// Standardised deviation for means, relative error for variances,
    /// `analytic − monte_carlo` for bounds, coverage for coverage checks.
    pub statistic: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub formula: Formula,
    pub runs: usize,
    pub seed: u64,
    pub params: McParams,
    pub checks: Vec<McCheck>,
    /// Failed checks tolerated before the report fails.
    pub allowed_failures: usize,
    pub pass: bool,
}

impl McReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

impl fmt::Display for McReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} runs={} n={} seed={} -> {} ({} of {} checks failed, {} allowed)",
            self.formula,
            self.runs,
            self.params.n,
            self.seed,
            if self.pass { "PASS" } else { "FAIL" },
            self.failures(),
            self.checks.len(),
            self.allowed_failures
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<9} z={:<8.4} mc={:<12.6e} analytic={:<12.6e} stat={:<10.4} {}",
                c.quantity,
                c.z,
                c.monte_carlo,
                c.analytic,
                c.statistic,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Runs the Monte Carlo check of `formula`.
pub fn mc_validate(
    formula: Formula,
    params: &McParams,
    runs: usize,
    seed: u64,
) -> Result<McReport> {
    params.validate()?;
    if runs < 2 {
        return Err(BenchError::Config("at least two runs are needed".into()));
    }
    let (checks, allowed_failures) = match formula {
        Formula::AppendixA | Formula::AppendixB => (white_moments(params, runs, seed)?, 0),
        Formula::AppendixC => (noisy_moments(params, runs, seed)?, 0),
        Formula::AppendixD => {
            let checks = colored_bound(params, runs, seed)?;
            let allowed = checks.len() / 50;
            (checks, allowed)
        }
        Formula::Coverage => (coverage(params, runs, seed)?, 0),
    };
    let pass = checks.iter().filter(|c| !c.pass).count() <= allowed_failures;
    Ok(McReport {
        formula,
        runs,
        seed,
        params: params.clone(),
        checks,
        allowed_failures,
        pass,
    })
}

/// Per run, the averaged signature at every grid point.
fn averaged_signatures(
    params: &McParams,
    kind: &NoiseKind,
    runs: usize,
    seed: u64,
    offsets: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let spec = NoiseSpec {
        kind: kind.clone(),
        sigma: params.sigma,
    };
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r);
            let v = gen_noise_with(&spec, params.n, &mut rng)?;
            let n = params.n as f64;
            Ok(params
                .z_grid
                .iter()
                .map(|&z| {
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| {
                            let shift = if offsets.is_empty() {
                                0.0
                            } else {
                                offsets[i % offsets.len()]
                            };
                            params.signature.eval(z, x + shift)
                        })
                        .sum::<f64>()
                        / n
                })
                .collect())
        })
        .collect()
}

fn column_moments(samples: &[Vec<f64>], k: usize) -> (f64, f64) {
    let runs = samples.len() as f64;
    let mean = samples.iter().map(|s| s[k]).sum::<f64>() / runs;
    let var = samples.iter().map(|s| (s[k] - mean).powi(2)).sum::<f64>() / (runs - 1.0);
    (mean, var)
}

fn mean_and_variance_checks(
    samples: &[Vec<f64>],
    z_grid: &[f64],
    expected: impl Fn(usize) -> (f64, f64),
) -> Vec<McCheck> {
    let runs = samples.len() as f64;
    let mut checks = Vec::with_capacity(2 * z_grid.len());
    for (k, &z) in z_grid.iter().enumerate() {
        let (mc_mean, mc_var) = column_moments(samples, k);
        let (mean, var) = expected(k);
        let se = (mc_var / runs).sqrt();
        let t = if se > 0.0 {
            (mc_mean - mean) / se
        } else if mc_mean == mean {
            0.0
        } else {
            f64::INFINITY
        };
        checks.push(McCheck {
            quantity: "mean",
            z,
            monte_carlo: mc_mean,
            analytic: mean,
            statistic: t,
            pass: t.abs() <= MEAN_SE_TOLERANCE,
        });
        let rel = if var > 0.0 {
            (mc_var - var) / var
        } else {
            mc_var
        };
        checks.push(McCheck {
            quantity: "variance",
            z,
            monte_carlo: mc_var,
            analytic: var,
            statistic: rel,
            pass: rel.abs() <= VARIANCE_REL_TOLERANCE,
        });
    }
    checks
}

fn white_moments(params: &McParams, runs: usize, seed: u64) -> Result<Vec<McCheck>> {
    let samples = averaged_signatures(params, &NoiseKind::White, runs, seed, &[])?;
    let moments: Vec<(f64, f64)> = params
        .z_grid
        .iter()
        .map(|&z| params.signature.moments(z, params.sigma))
        .collect::<Result<_>>()?;
    let n = params.n as f64;
    Ok(mean_and_variance_checks(&samples, &params.z_grid, |k| {
        (moments[k].0, moments[k].1 / n)
    }))
}

fn noisy_moments(params: &McParams, runs: usize, seed: u64) -> Result<Vec<McCheck>> {
    if params.theta_bars.is_empty() {
        return Err(BenchError::Config(
            "noisy-data check needs theta values".into(),
        ));
    }
    let thetas: Vec<f64> = (0..params.n)
        .map(|i| params.theta_bars[i % params.theta_bars.len()])
        .collect();
    let indicator = McParams {
        signature: SignatureKind::Indicator,
        ..params.clone()
    };
    let samples = averaged_signatures(
        &indicator,
        &NoiseKind::White,
        runs,
        seed,
        &params.theta_bars,
    )?;
    let stats = expected_noisy_curve(&params.z_grid, &thetas, params.sigma)?;
    Ok(mean_and_variance_checks(&samples, &params.z_grid, |k| {
        (stats.mean[k], stats.variance[k])
    }))
}

fn colored_bound(params: &McParams, runs: usize, seed: u64) -> Result<Vec<McCheck>> {
    let kind = NoiseKind::Ar1(params.ar1);
    kind.validate()?;
    let indicator = McParams {
        signature: SignatureKind::Indicator,
        ..params.clone()
    };
    let samples = averaged_signatures(&indicator, &kind, runs, seed, &[])?;
    let profile = theoretical_profile(
        &NoiseSpec {
            kind,
            sigma: params.sigma,
        },
        params.n,
    )?;
    params
        .z_grid
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let (_, mc_var) = column_moments(&samples, k);
            let bound = colored_variance_bound(z, params.sigma, &profile, params.n)?;
            Ok(McCheck {
                quantity: "bound",
                z,
                monte_carlo: mc_var,
                analytic: bound,
                statistic: bound - mc_var,
                pass: mc_var <= bound,
            })
        })
        .collect()
}

fn coverage(params: &McParams, runs: usize, seed: u64) -> Result<Vec<McCheck>> {
    let indicator = McParams {
        signature: SignatureKind::Indicator,
        ..params.clone()
    };
    let samples = averaged_signatures(&indicator, &NoiseKind::White, runs, seed, &[])?;
    let band = white_band(&params.z_grid, params.sigma, params.n, params.lambda)?;
    Ok(params
        .z_grid
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let inside = samples.iter().filter(|s| band.contains(k, s[k])).count();
            let frac = inside as f64 / samples.len() as f64;
            McCheck {
                quantity: "coverage",
                z,
                monte_carlo: frac,
                analytic: band.confidence.get(),
                statistic: frac,
                pass: frac >= COVERAGE_FLOOR,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_specialisation_reproduces_appendix_b() {
        let a = McParams {
            signature: SignatureKind::Indicator,
            ..McParams::defaults(Formula::AppendixA)
        };
        let b = McParams::defaults(Formula::AppendixB);
        let ra = mc_validate(Formula::AppendixA, &a, 200, 5).unwrap();
        let rb = mc_validate(Formula::AppendixB, &b, 200, 5).unwrap();
        assert_eq!(ra.checks, rb.checks);
    }

    #[test]
    fn small_runs_pass() {
        for f in [Formula::AppendixA, Formula::AppendixB, Formula::AppendixC] {
            let p = McParams {
                n: 512,
                ..McParams::defaults(f)
            };
            let report = mc_validate(f, &p, 400, 3).unwrap();
            assert!(report.pass, "{report}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let p = McParams::defaults(Formula::AppendixB);
        assert!(mc_validate(Formula::AppendixB, &p, 1, 0).is_err());
        assert!(mc_validate(Formula::AppendixB, &McParams { n: 1, ..p.clone() }, 10, 0).is_err());
        assert!(mc_validate(
            Formula::AppendixB,
            &McParams {
                z_grid: vec![-1.0],
                ..p
            },
            10,
            0
        )
        .is_err());
        assert_eq!("APPENDIXd".parse::<Formula>().unwrap(), Formula::AppendixD);
        assert!("appendixE".parse::<Formula>().is_err());
    }

    #[test]
    fn kernel_moments_by_quadrature() {
        // midpoint rule of g and g² against the N(0, σ²) density
        let (z, sigma): (f64, f64) = (0.8, 1.3);
        let (mut m1, mut m2) = (0.0, 0.0);
        let h = 1e-3;
        let mut x = -12.0 * sigma + 0.5 * h;
        while x < 12.0 * sigma {
            let pdf = (-x * x / (2.0 * sigma * sigma)).exp()
                / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            let g = SignatureKind::GaussianKernel.eval(z, x);
            m1 += g * pdf * h;
            m2 += g * g * pdf * h;
            x += h;
        }
        let (mean, var) = SignatureKind::GaussianKernel.moments(z, sigma).unwrap();
        assert!((mean - m1).abs() < 1e-9);
        assert!((var - (m2 - m1 * m1)).abs() < 1e-9);
    }
}
