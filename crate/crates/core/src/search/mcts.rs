//! Monte-Carlo tree search with progressive widening (UCT over sampled
//! decisions).

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::result::{Outcome, SearchResult, SearchStats};
use super::SearchError;
use crate::heuristics::GoalCounting;
use crate::model::{goal_test, Decision, Problem, State};
use crate::sampling::{sample_uniform, DecisionSpace, NodeSamplerState, SampleOutcome, DEFAULT_GRID_DIGITS, DEFAULT_REJECT_BUDGET};

#[derive(Debug, Clone, PartialEq)]
pub struct MctsConfig {
    pub alpha: f64,
    pub k: f64,
    /// UCB1 exploration constant.
    pub c: f64,
    pub rollout_depth: u32,
    /// Maximum number of trials.
    pub trial_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub seed: u64,
    pub grid_digits: u32,
    pub reject_budget: u32,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            alpha: 0.3,
            k: 1.0,
            c: std::f64::consts::SQRT_2,
            rollout_depth: 50,
            trial_limit: None,
            time_limit: None,
            seed: 0,
            grid_digits: DEFAULT_GRID_DIGITS,
            reject_budget: DEFAULT_REJECT_BUDGET,
        }
    }
}

impl MctsConfig {
    pub fn check(&self) -> Result<(), SearchError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(SearchError::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(SearchError::Config(format!("exploration constant must be positive, got {}", self.c)));
        }
        if self.k.is_nan() || self.k <= 0.0 {
            return Err(SearchError::Config(format!("widening coefficient must be positive, got {}", self.k)));
        }
        if self.trial_limit == Some(0) || self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(SearchError::Config("limits must be positive".into()));
        }
        if self.reject_budget == 0 {
            return Err(SearchError::Config("rejection budget must be at least 1".into()));
        }
        Ok(())
    }

    /// Children a node with `visits` visits may have: `ceil(k * N^alpha)`.
    pub fn widening_limit(&self, visits: u64) -> u64 {
        (self.k * (visits as f64).powf(self.alpha)).ceil() as u64
    }
}

/// A new child was added to `node`, which now has `children` children and
/// `visits` visits counting the current trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidenEvent {
    pub node: usize,
    pub visits: u64,
    pub children: usize,
}

pub trait MctsObserver {
    fn widened(&mut self, ev: WidenEvent);
}

impl MctsObserver for () {
    fn widened(&mut self, _: WidenEvent) {}
}

impl MctsObserver for Vec<WidenEvent> {
    fn widened(&mut self, ev: WidenEvent) {
        self.push(ev);
    }
}

struct MctsNode {
    state: State,
    visits: u64,
    reward: f64,
    children: Vec<(Decision, usize)>,
    sampler: NodeSamplerState,
}

impl MctsNode {
    fn new(state: State) -> Self {
        MctsNode { state, visits: 0, reward: 0.0, children: Vec::new(), sampler: NodeSamplerState::default() }
    }
}

fn ucb1(parent_visits: u64, child: &MctsNode, c: f64) -> f64 {
    if child.visits == 0 {
        return f64::INFINITY;
    }
    let mean = child.reward / child.visits as f64;
    mean + c * ((parent_visits as f64).ln() / child.visits as f64).sqrt()
}

pub fn mcts_pw_run(p: &Problem, cfg: &MctsConfig) -> Result<SearchResult, SearchError> {
    mcts_pw_run_observed(p, cfg, &mut ())
}

pub fn mcts_pw_run_observed(
    p: &Problem,
    cfg: &MctsConfig,
    obs: &mut dyn MctsObserver,
) -> Result<SearchResult, SearchError> {
    cfg.check()?;
    let started = Instant::now();
    let space = DecisionSpace::new(p);
    let h = GoalCounting::new(&p.goal);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut nodes = vec![MctsNode::new(p.init.clone())];
    let mut stats = SearchStats { generated: 1, ..Default::default() };

    let outcome = loop {
        if cfg.trial_limit.is_some_and(|l| stats.expansions >= l) {
            break (Outcome::Budget, None);
        }
        if cfg.time_limit.is_some_and(|t| started.elapsed() >= t) {
            break (Outcome::Timeout, None);
        }
        stats.expansions += 1;

        let mut path = vec![0usize];
        let mut plan: Vec<Decision> = Vec::new();
        let mut cur = 0usize;
        let mut reached_goal = false;
        // selection and widening
        loop {
            if goal_test(&nodes[cur].state, &p.goal)? {
                reached_goal = true;
                break;
            }
            let visits = nodes[cur].visits + 1;
            let mut added = None;
            if (nodes[cur].children.len() as u64) < cfg.widening_limit(visits) {
                let node = &mut nodes[cur];
                let out = sample_uniform(&space, &node.state, &mut node.sampler, &mut rng, cfg.grid_digits, cfg.reject_budget);
                if let SampleOutcome::Success { decision, successor } = out {
                    let child = nodes.len();
                    nodes.push(MctsNode::new(successor));
                    nodes[cur].children.push((decision.clone(), child));
                    stats.generated += 1;
                    obs.widened(WidenEvent { node: cur, visits, children: nodes[cur].children.len() });
                    added = Some((decision, child));
                }
            }
            if let Some((decision, child)) = added {
                plan.push(decision);
                path.push(child);
                cur = child;
                reached_goal = goal_test(&nodes[cur].state, &p.goal)?;
                break;
            }
            let node = &nodes[cur];
            if node.children.is_empty() {
                break;
            }
            let parent_visits = node.visits.max(1);
            let mut best = 0;
            let mut best_v = f64::NEG_INFINITY;
            for (i, (_, c)) in node.children.iter().enumerate() {
                let v = ucb1(parent_visits, &nodes[*c], cfg.c);
                if v > best_v {
                    best_v = v;
                    best = i;
                }
            }
            let (decision, child) = node.children[best].clone();
            plan.push(decision);
            path.push(child);
            cur = child;
        }

        // rollout
        let mut reward = 1.0;
        if !reached_goal {
            let mut s = nodes[cur].state.clone();
            for _ in 0..cfg.rollout_depth {
                let mut scratch = NodeSamplerState::default();
                match sample_uniform(&space, &s, &mut scratch, &mut rng, cfg.grid_digits, cfg.reject_budget) {
                    SampleOutcome::Success { decision, successor } => {
                        plan.push(decision);
                        s = successor;
                        if goal_test(&s, &p.goal)? {
                            reached_goal = true;
                            break;
                        }
                    }
                    SampleOutcome::Failure => break,
                }
            }
            if !reached_goal {
                reward = 1.0 / (1.0 + h.count(&s) as f64);
            }
        }

        for &i in &path {
            nodes[i].visits += 1;
            nodes[i].reward += reward;
        }
        if reached_goal {
            break (Outcome::Solved, Some(plan));
        }
    };
    stats.peak_open = nodes.len();
    stats.root_n = nodes[0].visits;
    stats.wall_time = started.elapsed();
    Ok(SearchResult { outcome: outcome.0, plan: outcome.1, stats })
}
