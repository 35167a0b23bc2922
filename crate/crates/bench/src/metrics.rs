//! Reconstruction error and number formatting shared by every report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Denominator of the normalized reconstruction error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MseDenominator {
    /// `‖ŷ − ȳ‖² / ‖ȳ‖²`.
    #[default]
    NormSquared,
    /// `‖ŷ − ȳ‖² / ‖ȳ‖`.
    Norm,
}

impl MseDenominator {
    pub fn as_str(self) -> &'static str {
        match self {
            MseDenominator::NormSquared => "norm-squared",
            MseDenominator::Norm => "norm",
        }
    }
}

impl fmt::Display for MseDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MseDenominator {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm-squared" | "norm2" => Ok(MseDenominator::NormSquared),
            "norm" => Ok(MseDenominator::Norm),
            _ => Err(BenchError::Config(format!("unknown MSE denominator {s:?}"))),
        }
    }
}

/// Normalized reconstruction error of `estimate` against `truth`.
pub fn normalized_mse(estimate: &[f64], truth: &[f64], denominator: MseDenominator) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(nide_core::Error::LengthMismatch {
            left: estimate.len(),
            right: truth.len(),
        }
        .into());
    }
    let energy: f64 = truth.iter().map(|v| v * v).sum();
    if !(energy > 0.0) {
        return Err(nide_core::Error::ZeroEnergy.into());
    }
    let err: f64 = estimate
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(match denominator {
        MseDenominator::NormSquared => err / energy,
        MseDenominator::Norm => err / energy.sqrt(),
    })
}

/// Formats `x` with six significant digits, switching to exponent notation
/// for very large or very small magnitudes.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..=5).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, x)
    } else {
        sci
    }
}

/// `x` rounded to six significant digits.
pub fn round_sig6(x: f64) -> f64 {
    fmt_sig6(x).parse().unwrap_or(x)
}

/// Mean and sample standard deviation, summed in slice order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}
