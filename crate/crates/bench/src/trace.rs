//! Sorted-coefficient curves against the noise band, for plotting.

use std::io::Write;

use nide_core::nide::{select_threshold_detailed, BandModel, BandParams};
use nide_core::noise_model::{calibrate_noise_to_snr, gen_noise_with, haar_noise};
use nide_core::signals::gen_signal;
use nide_core::wavelet::dwt_forward;
use nide_core::{NoiseKind, NoiseSpec, SignalName};

use crate::error::Result;
use crate::experiment::{trial_rng, ExperimentConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BandTrace {
    pub z: Vec<f64>,
    pub g: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub threshold: f64,
    pub sigma: f64,
}

impl BandTrace {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "z,g,lower,upper")?;
        for i in 0..self.z.len() {
            writeln!(
                out,
                "{},{},{},{}",
                self.z[i], self.g[i], self.lower[i], self.upper[i]
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub signal: SignalName,
    pub snr_db: f64,
    pub noise: NoiseKind,
    pub lambda: f64,
    pub seed: u64,
    pub length: usize,
    pub levels: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            signal: SignalName::Blocks,
            snr_db: 5.0,
            noise: NoiseKind::White,
            lambda: 4.5,
            seed: 0,
            length: 2048,
            levels: 5,
        }
    }
}

/// Sorted absolute detail coefficients of one noisy realisation with the
/// band NIDe compares them to. White noise traces the pooled details;
/// colored noise traces the finest band, the one whose band is reported by
/// the pipeline.
pub fn band_trace(config: &TraceConfig) -> Result<BandTrace> {
    let experiment = ExperimentConfig {
        noise: config.noise.clone(),
        length: config.length,
        levels: config.levels,
        lambda: config.lambda,
        ..Default::default()
    };
    let denoise_config = experiment.denoise_config()?;
    denoise_config.validate()?;
    let signal = gen_signal(config.signal, config.length)?.samples;
    let mut rng = trial_rng(config.seed, 0);
    let spec = NoiseSpec {
        kind: config.noise.clone(),
        sigma: 1.0,
    };
    let noise = gen_noise_with(&spec, config.length, &mut rng)?;
    let noise = calibrate_noise_to_snr(&signal, &noise, config.snr_db)?;
    let observed: Vec<f64> = signal.iter().zip(&noise).map(|(s, v)| s + v).collect();
    let coeffs = dwt_forward(&observed, config.levels)?;
    let finest_sigma = denoise_config.sigma_for(&coeffs)?;
    let (pool, params) = match &denoise_config.band {
        BandModel::White => (
            coeffs.details(),
            BandParams::white(finest_sigma, config.lambda),
        ),
        BandModel::Colored(profile) => {
            let finest = haar_noise(profile, 1, config.length)?.details.remove(0);
            let params = BandParams {
                sigma: finest_sigma,
                lambda: config.lambda,
                model: BandModel::Colored(finest.profile),
            };
            (coeffs.finest_detail().to_vec(), params)
        }
    };
    let sel = select_threshold_detailed(&pool, &params)?;
    Ok(BandTrace {
        z: sel.sorted,
        g: sel.empirical,
        lower: sel.band.lower,
        upper: sel.band.upper,
        threshold: sel.threshold,
        sigma: finest_sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_is_well_formed() {
        let cfg = TraceConfig {
            length: 1024,
            ..Default::default()
        };
        let trace = band_trace(&cfg).unwrap();
        assert_eq!(trace.z.len(), 1024 - 32);
        assert!(trace.z.windows(2).all(|w| w[0] <= w[1]));
        assert!(trace.lower.iter().zip(&trace.upper).all(|(l, u)| l <= u));
        let mut csv = Vec::new();
        trace.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("z,g,lower,upper\n"));
        assert!(trace.threshold > 0.0 && trace.threshold < *trace.z.last().unwrap());
    }

    #[test]
    fn colored_trace_uses_finest_band() {
        let cfg = TraceConfig {
            length: 1024,
            noise: NoiseKind::Ar1(0.8),
            ..Default::default()
        };
        assert_eq!(band_trace(&cfg).unwrap().z.len(), 512);
    }
}
