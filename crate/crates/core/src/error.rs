use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("{name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("empty interval [{lower}, {upper}]")]
    EmptyInterval { lower: f64, upper: f64 },
    #[error("{0} consecutive zero-norm direction draws")]
    DegenerateDirection(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("unknown target id {0}")]
    UnknownTarget(usize),
}

/// A configuration value that failed validation, with the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl From<SamplerError> for ConfigError {
    fn from(e: SamplerError) -> Self {
        ConfigError::new("process", e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("no records to aggregate")]
    Empty,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    #[error("cell {cell} ({label}): {message}")]
    Cell { cell: usize, label: String, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Store(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl CampaignError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CampaignError::Io { path: path.into(), source }
    }
}
