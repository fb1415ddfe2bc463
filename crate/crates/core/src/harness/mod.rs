//! Experiment harness: algorithm flags, suite files, batch execution and
//! the CSV reports (coverage table, survival series, pairwise comparison).

mod algo;
mod record;
mod report;
mod suite;

pub use algo::{AlgoArgs, AlgoConfig, AlgoName, RectName, SamplerName, Switch};
pub use record::{domain_of, read_records, write_records, CellOutcome, RunRecord, CSV_HEADER};
pub use report::{best_of, coverage_table, pairwise_compare, select, survival_data, CoverageCell, CoverageTable, Metric};
pub use suite::{run_cell, run_suite, AlgorithmEntry, Clock, InstanceSource, SuiteConfig, DEFAULT_TIME_LIMIT};

use thiserror::Error;

use crate::search::SearchError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Flags(String),
    #[error("suite config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e.to_string())
    }
}
