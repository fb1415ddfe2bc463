//! State heuristics. Every heuristic here is goal-aware: it is zero on goal
//! states.

use thiserror::Error;

use crate::model::{goal_test, Constraint, Problem, State};

pub trait Heuristic: Send + Sync {
    fn name(&self) -> &str;
    /// Nonnegative estimate for `s`.
    fn estimate(&self, s: &State) -> f64;
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown heuristic `{0}` (available: gc)")]
pub struct UnknownHeuristic(pub String);

/// Top-level conjuncts of `goal`: nested conjunctions are flattened and any
/// other node counts as one conjunct.
pub fn flatten_conjuncts(goal: &Constraint) -> Vec<&Constraint> {
    fn go<'a>(c: &'a Constraint, out: &mut Vec<&'a Constraint>) {
        match c {
            Constraint::And(cs) => cs.iter().for_each(|c| go(c, out)),
            other => out.push(other),
        }
    }
    let mut out = Vec::new();
    go(goal, &mut out);
    out
}

/// Number of unsatisfied top-level goal conjuncts.
#[derive(Debug, Clone)]
pub struct GoalCounting {
    conjuncts: Vec<Constraint>,
}

impl GoalCounting {
    pub fn new(goal: &Constraint) -> Self {
        GoalCounting { conjuncts: flatten_conjuncts(goal).into_iter().cloned().collect() }
    }

    pub fn conjunct_count(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn count(&self, s: &State) -> usize {
        // a conjunct that fails to evaluate cannot be satisfied
        self.conjuncts.iter().filter(|c| !goal_test(s, c).unwrap_or(false)).count()
    }
}

impl Heuristic for GoalCounting {
    fn name(&self) -> &str {
        "gc"
    }

    fn estimate(&self, s: &State) -> f64 {
        self.count(s) as f64
    }
}

pub fn h_gc(s: &State, p: &Problem) -> usize {
    GoalCounting::new(&p.goal).count(s)
}

pub fn by_name(name: &str, p: &Problem) -> Result<Box<dyn Heuristic>, UnknownHeuristic> {
    match name {
        "gc" | "goal-counting" => Ok(Box::new(GoalCounting::new(&p.goal))),
        other => Err(UnknownHeuristic(other.to_string())),
    }
}
