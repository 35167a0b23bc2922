//! Denoising of user data stored as a single CSV column.

use std::io::{BufRead, Write};
use std::str::FromStr;

use nide_core::nide::{denoise, BandModel, DenoiseConfig, DenoiseResult, NoiseEstimate};
use nide_core::noise_model::theoretical_profile;
use nide_core::{NoiseKind, NoiseSpec};
use serde::Serialize;

use crate::error::{BenchError, Result};

/// What to do with input whose length is not a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PadMode {
    /// Refuse the input.
    #[default]
    Reject,
    /// Append zeros up to the next power of two; the output is truncated
    /// back to the input length.
    Zero,
}

impl FromStr for PadMode {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "reject" => Ok(PadMode::Reject),
            "zero" => Ok(PadMode::Zero),
            _ => Err(BenchError::Config(format!("unknown pad mode {s:?}"))),
        }
    }
}

/// Reads one sample per line. Blank lines are skipped; a non-numeric first
/// line is taken as a header; only the first comma-separated field is used.
pub fn read_column<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ if i == 0 => continue,
            _ => {
                return Err(BenchError::Parse {
                    line: i + 1,
                    text: field.to_string(),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(nide_core::Error::EmptyInput.into());
    }
    Ok(out)
}

pub fn write_column<W: Write>(mut out: W, values: &[f64]) -> Result<()> {
    writeln!(out, "denoised")?;
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileDenoise {
    pub denoised: Vec<f64>,
    pub result: DenoiseResult,
    /// Zeros appended before the transform.
    pub padded: usize,
}

/// Sidecar summary written next to the denoised column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sidecar {
    pub threshold: f64,
    pub sigma_used: f64,
    pub lambda: f64,
}

/// Denoises `samples` with NIDe. `sigma` fixes the noise level instead of
/// estimating it; colored `noise` switches to the per-level colored band.
pub fn denoise_samples(
    samples: &[f64],
    levels: usize,
    lambda: f64,
    noise: &NoiseKind,
    sigma: Option<f64>,
    pad: PadMode,
) -> Result<FileDenoise> {
    let len = samples.len();
    let target = len.next_power_of_two();
    if target != len && pad == PadMode::Reject {
        return Err(nide_core::Error::NonDyadicLength(len).into());
    }
    let mut x = samples.to_vec();
    x.resize(target, 0.0);
    let band = if noise.is_white() {
        BandModel::White
    } else {
        BandModel::Colored(theoretical_profile(
            &NoiseSpec {
                kind: noise.clone(),
                sigma: 1.0,
            },
            target,
        )?)
    };
    let config = DenoiseConfig {
        levels,
        lambda,
        noise: sigma.map_or(NoiseEstimate::Mad, NoiseEstimate::Known),
        band,
        ..Default::default()
    };
    let result = denoise(&x, &config)?;
    let mut denoised = result.denoised.clone();
    denoised.truncate(len);
    Ok(FileDenoise {
        denoised,
        result,
        padded: target - len,
    })
}
