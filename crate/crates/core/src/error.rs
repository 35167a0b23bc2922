use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("noise standard deviation must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("z must be nonnegative and finite, got {0}")]
    InvalidZ(f64),
    #[error("input must not be empty")]
    EmptyInput,
    #[error("band length must be at least 1")]
    InvalidLength,
    #[error("lambda must lie in [0, {max}], got {value}")]
    InvalidLambda { value: f64, max: f64 },
    #[error("probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("correlation coefficient {value} at lag {lag} is outside the admissible range")]
    InvalidCorrelation { lag: usize, value: f64 },
    #[error("correlation profile must start with rho[0] = 1, got {0}")]
    ProfileNotNormalized(f64),
    #[error("signal length {0} is not a power of two")]
    NonDyadicLength(usize),
    #[error("{levels} decomposition levels requested for a signal of length {len}")]
    TooManyLevels { levels: usize, len: usize },
    #[error("inconsistent coefficient bands: {0}")]
    InconsistentBands(String),
    #[error("threshold must be nonnegative and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("reference signal has zero energy")]
    ZeroEnergy,
    #[error("invalid noise specification: {0}")]
    InvalidNoiseSpec(String),
    #[error("unknown test signal `{0}`")]
    UnknownSignal(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("signal length {0} is too short (minimum 64)")]
    SignalTooShort(usize),
}
