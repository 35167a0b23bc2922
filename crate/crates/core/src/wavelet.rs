//! Orthonormal multilevel Haar transform.
//!
//! One analysis step maps a pair `(a, b)` to the approximation `(a + b)/√2`
//! and the detail `(a − b)/√2`; the pyramid repeats this on the
//! approximation. Only dyadic lengths are accepted, so the transform is
//! exact and energy preserving.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Leveled Haar coefficients.
///
/// `detail_bands[0]` is the finest band (length `N/2`), the last detail band
/// is the coarsest; `approx_band` holds the remaining `N/2^levels`
/// approximation coefficients. The flat layout used by [`Self::flatten`] is
/// finest detail first, approximation last.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub detail_bands: Vec<Vec<f64>>,
    pub approx_band: Vec<f64>,
    pub original_length: usize,
}

impl CoefficientSet {
    pub fn levels(&self) -> usize {
        self.detail_bands.len()
    }

    /// The finest detail band, or the approximation band for a zero-level set.
    pub fn finest_detail(&self) -> &[f64] {
        self.detail_bands
            .first()
            .map(Vec::as_slice)
            .unwrap_or(&self.approx_band)
    }

    /// All detail coefficients pooled in flat order.
    pub fn details(&self) -> Vec<f64> {
        self.detail_bands.iter().flatten().copied().collect()
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.original_length);
        for band in &self.detail_bands {
            out.extend_from_slice(band);
        }
        out.extend_from_slice(&self.approx_band);
        out
    }

    /// Rebuilds a set from the flat layout of [`Self::flatten`].
    pub fn from_flat(flat: &[f64], levels: usize) -> Result<Self> {
        check_dyadic(flat.len(), levels)?;
        let mut detail_bands = Vec::with_capacity(levels);
        let mut offset = 0;
        let mut len = flat.len() / 2;
        for _ in 0..levels {
            detail_bands.push(flat[offset..offset + len].to_vec());
            offset += len;
            len /= 2;
        }
        Ok(Self {
            detail_bands,
            approx_band: flat[offset..].to_vec(),
            original_length: flat.len(),
        })
    }

    pub fn energy(&self) -> f64 {
        self.detail_bands
            .iter()
            .flatten()
            .chain(&self.approx_band)
            .map(|c| c * c)
            .sum()
    }

    /// Applies `f` to every detail coefficient.
    pub fn map_details(&mut self, mut f: impl FnMut(f64) -> f64) {
        for band in &mut self.detail_bands {
            for c in band.iter_mut() {
                *c = f(*c);
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.original_length;
        check_dyadic(n, self.levels())?;
        let mut expected = n / 2;
        for (level, band) in self.detail_bands.iter().enumerate() {
            if band.len() != expected {
                return Err(Error::InconsistentBands(format!(
                    "detail band {level} has length {} (expected {expected})",
                    band.len()
                )));
            }
            expected /= 2;
        }
        let approx = n >> self.levels();
        if self.approx_band.len() != approx {
            return Err(Error::InconsistentBands(format!(
                "approximation band has length {} (expected {approx})",
                self.approx_band.len()
            )));
        }
        Ok(())
    }
}

fn check_dyadic(len: usize, levels: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NonDyadicLength(len));
    }
    if levels > len.trailing_zeros() as usize {
        return Err(Error::TooManyLevels { levels, len });
    }
    Ok(())
}

/// Largest usable decomposition depth for a signal of length `len`.
pub fn max_levels(len: usize) -> usize {
    if len.is_power_of_two() {
        len.trailing_zeros() as usize
    } else {
        0
    }
}

pub fn dwt_forward(signal: &[f64], levels: usize) -> Result<CoefficientSet> {
    check_dyadic(signal.len(), levels)?;
    let mut approx = signal.to_vec();
    let mut detail_bands = Vec::with_capacity(levels);
    for _ in 0..levels {
        let half = approx.len() / 2;
        let mut next = Vec::with_capacity(half);
        let mut detail = Vec::with_capacity(half);
        for pair in approx.chunks_exact(2) {
            next.push((pair[0] + pair[1]) * FRAC_1_SQRT_2);
            detail.push((pair[0] - pair[1]) * FRAC_1_SQRT_2);
        }
        detail_bands.push(detail);
        approx = next;
    }
    Ok(CoefficientSet {
        detail_bands,
        approx_band: approx,
        original_length: signal.len(),
    })
}

pub fn dwt_inverse(coeffs: &CoefficientSet) -> Result<Vec<f64>> {
    coeffs.validate()?;
    let mut approx = coeffs.approx_band.clone();
    for detail in coeffs.detail_bands.iter().rev() {
        let mut next = Vec::with_capacity(2 * approx.len());
        for (&a, &d) in approx.iter().zip(detail) {
            next.push((a + d) * FRAC_1_SQRT_2);
            next.push((a - d) * FRAC_1_SQRT_2);
        }
        approx = next;
    }
    Ok(approx)
}
