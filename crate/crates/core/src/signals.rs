//! The six classic wavelet-shrinkage test signals.
//!
//! Samples sit on the grid `t_i = i/n`, `i = 1..=n`, and every signal is
//! rescaled to a sample standard deviation of [`NOMINAL_STD`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::wavelet::dwt_forward;

/// Target sample standard deviation of every generated signal.
pub const NOMINAL_STD: f64 = 7.0;

const BLOCK_POS: [f64; 11] = [
    0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81,
];
const BLOCK_HGT: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMP_HGT: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WTH: [f64; 11] = [
    0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignalName {
    Blocks,
    Bumps,
    HeavySine,
    Doppler,
    QuadChirp,
    MishMash,
}

impl SignalName {
    pub const ALL: [SignalName; 6] = [
        SignalName::Blocks,
        SignalName::Bumps,
        SignalName::HeavySine,
        SignalName::Doppler,
        SignalName::QuadChirp,
        SignalName::MishMash,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SignalName::Blocks => "blocks",
            SignalName::Bumps => "bumps",
            SignalName::HeavySine => "heavysine",
            SignalName::Doppler => "doppler",
            SignalName::QuadChirp => "quadchirp",
            SignalName::MishMash => "mishmash",
        }
    }
}

impl fmt::Display for SignalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignalName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match key.to_ascii_lowercase().as_str() {
            "blocks" => Ok(SignalName::Blocks),
            "bumps" => Ok(SignalName::Bumps),
            "heavysine" | "heavisine" | "heavysin" => Ok(SignalName::HeavySine),
            "doppler" => Ok(SignalName::Doppler),
            "quadchirp" => Ok(SignalName::QuadChirp),
            "mishmash" => Ok(SignalName::MishMash),
            _ => Err(Error::UnknownSignal(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestSignal {
    pub name: SignalName,
    pub samples: Vec<f64>,
    /// Sample standard deviation the samples were scaled to.
    pub nominal_norm: f64,
}

/// Unit step, right continuous: one for `x ≥ 0`.
#[inline]
fn step(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Unscaled signal value at `t ∈ (0, 1]` for a length-`n` grid. Only the
/// chirps depend on `n`.
pub fn raw_value(name: SignalName, t: f64, n: usize) -> f64 {
    let nf = n as f64;
    match name {
        SignalName::Blocks => BLOCK_POS
            .iter()
            .zip(BLOCK_HGT)
            .map(|(&p, h)| h * step(t - p))
            .sum(),
        SignalName::Bumps => BLOCK_POS
            .iter()
            .zip(BUMP_HGT.iter().zip(BUMP_WTH))
            .map(|(&p, (&h, w))| h / (1.0 + ((t - p) / w).abs()).powi(4))
            .sum(),
        SignalName::HeavySine => {
            4.0 * (4.0 * PI * t).sin() - (t - 0.3).signum() - (0.72 - t).signum()
        }
        SignalName::Doppler => (t * (1.0 - t)).sqrt() * (2.0 * PI * 1.05 / (t + 0.05)).sin(),
        SignalName::QuadChirp => (PI / 3.0 * t * (nf * t)).sin(),
        SignalName::MishMash => {
            (PI / 3.0 * t * (nf * t)).sin()
                + (PI * (nf * 0.6902) * t).sin()
                + (PI * t * (nf * 0.125 * t)).sin()
        }
    }
}

/// Generates `name` on `n` samples, `n` a power of two no smaller than 64.
pub fn gen_signal(name: SignalName, n: usize) -> Result<TestSignal> {
    if !n.is_power_of_two() {
        return Err(Error::NonDyadicLength(n));
    }
    if n < 64 {
        return Err(Error::SignalTooShort(n));
    }
    let raw: Vec<f64> = (1..=n)
        .map(|i| raw_value(name, i as f64 / n as f64, n))
        .collect();
    let mean = raw.iter().sum::<f64>() / n as f64;
    let sd = (raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let scale = NOMINAL_STD / sd;
    Ok(TestSignal {
        name,
        samples: raw.iter().map(|v| v * scale).collect(),
        nominal_norm: NOMINAL_STD,
    })
}

/// Equal-width histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Histogram of all Haar detail coefficients of `signal`.
pub fn coefficient_histogram(signal: &[f64], levels: usize, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidLength);
    }
    let details = dwt_forward(signal, levels)?.details();
    if details.is_empty() {
        return Err(Error::EmptyInput);
    }
    let lo = details.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = details.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0; bins];
    for d in details {
        let idx = (((d - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}
