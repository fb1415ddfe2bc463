use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::model::Decision;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Solved,
    Exhausted,
    Timeout,
    Budget,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::Timeout => "timeout",
            Outcome::Budget => "budget",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solved" => Ok(Outcome::Solved),
            "exhausted" => Ok(Outcome::Exhausted),
            "timeout" => Ok(Outcome::Timeout),
            "budget" => Ok(Outcome::Budget),
            other => Err(format!("unknown outcome `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    /// Extractions of non-goal nodes (S-BFS) or trials (MCTS).
    pub expansions: u64,
    /// Expansions of a node that had already been partially expanded.
    pub reexpansions: u64,
    pub generated: u64,
    pub peak_open: usize,
    pub wall_time: Duration,
    pub root_n: u64,
    /// `r_h(n, s0)` at termination.
    pub root_rh: f64,
}

impl SearchStats {
    /// Re-expansions as a percentage of all expansions.
    pub fn reexp_rate(&self) -> f64 {
        if self.expansions == 0 {
            0.0
        } else {
            self.reexpansions as f64 / self.expansions as f64 * 100.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub outcome: Outcome,
    /// Present iff solved.
    pub plan: Option<Vec<Decision>>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn plan_len(&self) -> Option<usize> {
        self.plan.as_ref().map(Vec::len)
    }

    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }
}
