//! Benchmark harness for noise invalidation denoising.
//!
//! - [`experiment`]: trial loops over signals, methods and SNRs, MSE tables
//!   and λ sweeps.
//! - [`trace`]: sorted-coefficient curves against the noise band.
//! - [`mc`]: Monte Carlo checks of the analytic signature statistics.
//! - [`file`]: denoising of user data from CSV.

pub mod error;
pub mod experiment;
pub mod file;
pub mod mc;
pub mod metrics;
pub mod trace;

pub use error::{BenchError, Result};
pub use experiment::{
    lambda_sweep, run_experiment, ExperimentConfig, ExperimentResult, ExperimentRow, Method,
    OutputFormat, SweepResult,
};
pub use mc::{mc_validate, Formula, McParams, McReport};
pub use metrics::{normalized_mse, MseDenominator};
pub use trace::{band_trace, BandTrace, TraceConfig};
