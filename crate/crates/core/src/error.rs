use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hyperparameter {name} = {value}: must be {constraint}")]
    InvalidHyperparameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("infeasible marginal moments: {0}")]
    Infeasible(String),

    #[error("invalid observation at index {index}: {value} ({reason})")]
    InvalidData {
        index: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} = {value} lies outside the open parameter domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("family mismatch: model is {model}, argument is {other}")]
    FamilyMismatch {
        model: crate::Family,
        other: crate::Family,
    },

    #[error("invalid criterion: {0}")]
    InvalidCriterion(String),

    #[error("at least {need} replicates required, got {got}")]
    TooFewReplicates { got: usize, need: usize },

    #[error("sample size must be at least 1")]
    ZeroSampleSize,

    #[error("no n <= {cap} satisfies the criterion (lhs at cap = {lhs_at_cap:e})")]
    BudgetExceeded { cap: u64, lhs_at_cap: f64 },

    #[error("degenerate prior: {0}")]
    DegeneratePrior(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("empirical dataset has {available} values, {requested} requested without replacement")]
    InsufficientData { available: usize, requested: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: no column named `{column}`")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{0}: dataset is empty")]
    EmptyDataset(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
