use std::io;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] nide_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("line {line}: cannot parse {text:?} as a sample")]
    Parse { line: usize, text: String },
}

pub type Result<T> = std::result::Result<T, BenchError>;
