//! Sampling best-first search and the MCTS baseline.

mod checks;
mod mcts;
mod open;
mod rectify;
mod result;
mod sbfs;
mod tree;

pub use checks::{assert_prop1, assert_thm2, check_f_consistency, TOLERANCE};
pub use mcts::{mcts_pw_run, mcts_pw_run_observed, MctsConfig, MctsObserver, WidenEvent};
pub use open::OpenList;
pub use rectify::{nec, EvalMode, Rectifier};
pub use result::{Outcome, SearchResult, SearchStats};
pub use sbfs::{sbfs_run, SampleEvent, Sbfs, SearchConfig, SearchObserver, TraceEvent};
pub use tree::{NodeId, NodeStatus, SearchNode, SearchTree};

use thiserror::Error;

use crate::heuristics::UnknownHeuristic;
use crate::model::ModelError;
use crate::sampling::SamplerConfigError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Sampler(#[from] SamplerConfigError),
    #[error(transparent)]
    Heuristic(#[from] UnknownHeuristic),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search contract violated: {0}")]
    Contract(String),
}
