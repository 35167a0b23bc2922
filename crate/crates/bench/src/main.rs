use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nide_bench::experiment::{
    lambda_sweep, run_experiment, ExperimentConfig, Method, OutputFormat,
};
use nide_bench::file::{denoise_samples, read_column, write_column, PadMode, Sidecar};
use nide_bench::mc::{mc_validate, Formula, McParams};
use nide_bench::metrics::MseDenominator;
use nide_bench::trace::{band_trace, TraceConfig};
use nide_core::{NoiseKind, SignalName};

#[derive(Parser)]
#[command(
    name = "nide-bench",
    version,
    about = "Noise invalidation denoising benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean normalized MSE over signals × methods × SNRs.
    Bench(BenchArgs),
    /// Sorted coefficients against the noise band for one realisation.
    Trace(TraceArgs),
    /// Monte Carlo check of an analytic formula.
    Mc(McArgs),
    /// NIDe error over a list of λ values.
    LambdaSweep(SweepArgs),
    /// Denoise a single-column CSV file.
    DenoiseFile(FileArgs),
}

#[derive(Args)]
struct Common {
    /// Noise model: white, ar1:<a> or ma:<t0,t1,...>.
    #[arg(long, default_value = "white", value_parser = parse_noise)]
    noise: NoiseKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, default_value_t = 4.5)]
    lambda: f64,
    /// Signal length, a power of two.
    #[arg(long, default_value_t = 2048)]
    length: usize,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Signals, comma separated, or "all".
    #[arg(long, default_value = "blocks")]
    signal: String,
    /// Methods, comma separated, or "all".
    #[arg(long, default_value = "all")]
    method: String,
    /// SNRs in dB, comma separated.
    #[arg(long, default_value = "1,4,8,10,14")]
    snr: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// norm-squared or norm.
    #[arg(long, default_value = "norm-squared", value_parser = parse_from_str::<MseDenominator>)]
    mse_denominator: MseDenominator,
    /// csv or json.
    #[arg(long, default_value = "csv", value_parser = parse_from_str::<OutputFormat>)]
    format: OutputFormat,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "blocks", value_parser = parse_from_str::<SignalName>)]
    signal: SignalName,
    #[arg(long, default_value_t = 5.0)]
    snr: f64,
}

#[derive(Args)]
struct McArgs {
    /// appendixA, appendixB, appendixC, appendixD or coverage.
    #[arg(long, value_parser = parse_from_str::<Formula>)]
    formula: Formula,
    #[arg(long, default_value_t = 2000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per run; the formula's default when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Write the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "blocks")]
    signal: String,
    #[arg(long, default_value = "8")]
    snr: String,
    /// λ values, comma separated.
    #[arg(long, default_value = "3,3.5,4,4.5,5")]
    lambdas: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "norm-squared", value_parser = parse_from_str::<MseDenominator>)]
    mse_denominator: MseDenominator,
    #[arg(long, default_value = "csv", value_parser = parse_from_str::<OutputFormat>)]
    format: OutputFormat,
}

#[derive(Args)]
struct FileArgs {
    /// Single-column CSV of samples.
    #[arg(long)]
    input: PathBuf,
    /// Denoised CSV; the sidecar JSON goes to the same path with `.json` appended.
    #[arg(long)]
    out: PathBuf,
    /// reject or zero.
    #[arg(long, default_value = "reject", value_parser = parse_from_str::<PadMode>)]
    pad: PadMode,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, default_value_t = 4.5)]
    lambda: f64,
    #[arg(long, default_value = "white", value_parser = parse_noise)]
    noise: NoiseKind,
    /// Known noise standard deviation; estimated from the data when omitted.
    #[arg(long)]
    sigma: Option<f64>,
}

fn parse_noise(s: &str) -> Result<NoiseKind, String> {
    s.parse::<NoiseKind>().map_err(|e| e.to_string())
}

fn parse_from_str<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn parse_list<T: FromStr + Clone>(s: &str, all: &[T]) -> anyhow::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|e| anyhow::anyhow!("{e}")))
        .collect()
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn experiment_config(
    common: &Common,
    signal: &str,
    snr: &str,
    trials: usize,
    mse_denominator: MseDenominator,
) -> anyhow::Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        signals: parse_list(signal, &SignalName::ALL)?,
        methods: Method::ALL.to_vec(),
        snr_db: parse_list::<f64>(snr, &[])?,
        noise: common.noise.clone(),
        trials,
        seed: common.seed,
        length: common.length,
        levels: common.levels,
        lambda: common.lambda,
        mse_denominator,
    })
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Bench(a) => {
            let mut config =
                experiment_config(&a.common, &a.signal, &a.snr, a.trials, a.mse_denominator)?;
            config.methods = parse_list(&a.method, &Method::ALL)?;
            let result = run_experiment(&config)?;
            let mut out = output(a.common.out.as_deref())?;
            result.write(&mut out, a.format)?;
            out.flush()?;
        }
        Command::Trace(a) => {
            let config = TraceConfig {
                signal: a.signal,
                snr_db: a.snr,
                noise: a.common.noise.clone(),
                lambda: a.common.lambda,
                seed: a.common.seed,
                length: a.common.length,
                levels: a.common.levels,
            };
            let trace = band_trace(&config)?;
            eprintln!("threshold {} sigma {}", trace.threshold, trace.sigma);
            let mut out = output(a.common.out.as_deref())?;
            trace.write_csv(&mut out)?;
            out.flush()?;
        }
        Command::Mc(a) => {
            let mut params = McParams::defaults(a.formula);
            if let Some(n) = a.n {
                params.n = n;
            }
            let report = mc_validate(a.formula, &params, a.runs, a.seed)?;
            let mut out = output(a.out.as_deref())?;
            if a.json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                write!(out, "{report}")?;
            }
            out.flush()?;
            if !report.pass {
                bail!("{} check failed", a.formula);
            }
        }
        Command::LambdaSweep(a) => {
            let config =
                experiment_config(&a.common, &a.signal, &a.snr, a.trials, a.mse_denominator)?;
            let lambdas = parse_list::<f64>(&a.lambdas, &[])?;
            let sweep = lambda_sweep(&config, &lambdas)?;
            if let (Some(best), Some(ratio)) = (sweep.best(), sweep.ratio_to_best(4.5)) {
                eprintln!(
                    "best lambda {} ; lambda 4.5 at {:.4} x best",
                    best.lambda, ratio
                );
            }
            let mut out = output(a.common.out.as_deref())?;
            sweep.write(&mut out, a.format)?;
            out.flush()?;
        }
        Command::DenoiseFile(a) => {
            let reader = BufReader::new(
                File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?,
            );
            let samples = read_column(reader)?;
            let run = denoise_samples(&samples, a.levels, a.lambda, &a.noise, a.sigma, a.pad)?;
            if run.padded > 0 {
                eprintln!(
                    "warning: padded {} samples with {} zeros",
                    samples.len(),
                    run.padded
                );
            }
            let mut out = output(Some(&a.out))?;
            write_column(&mut out, &run.denoised)?;
            out.flush()?;
            let mut sidecar_path = a.out.clone().into_os_string();
            sidecar_path.push(".json");
            let sidecar = Sidecar {
                threshold: run.result.threshold,
                sigma_used: run.result.sigma_used,
                lambda: a.lambda,
            };
            let mut side = output(Some(Path::new(&sidecar_path)))?;
            serde_json::to_writer_pretty(&mut side, &sidecar)?;
            writeln!(side)?;
            side.flush()?;
        }
    }
    Ok(())
}
