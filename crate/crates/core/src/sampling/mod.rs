//! Sampling functions over the decision space `D(s)`.
//!
//! Three strategies share the same contract: given a state and its
//! per-node bookkeeping, return one applicable decision with its successor,
//! or a failure marker once the rejection budget is spent.
//!
//! * systematic: round-robin over actions, dyadic control values
//!   (extremes first, then midpoints), fully deterministic;
//! * uniform: uniform action, uniform control values, rejection of
//!   inapplicable pairs;
//! * heuristic-guided: `N` uniform candidates, one picked with probability
//!   proportional to `(1 / (h(s') + ε))^β`.
//!
//! When no action reads a control variable the decision space is finite.
//! Each node then samples its actions without replacement and reports
//! exhaustion once all of them have been tried.

mod dyadic;

pub use dyadic::{dyadic_level, dyadic_value, nth_grid_point};

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use thiserror::Error;

use crate::heuristics::Heuristic;
use crate::model::{applicable, apply_effects, ControlValuation, ControlVarSpec, Decision, Problem, State};

pub const DEFAULT_REJECT_BUDGET: u32 = 100;
pub const DEFAULT_GRID_DIGITS: u32 = 3;
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_CANDIDATES: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedParams {
    pub beta: f64,
    pub eps: f64,
    pub candidates: u32,
}

impl Default for GuidedParams {
    fn default() -> Self {
        GuidedParams { beta: DEFAULT_BETA, eps: DEFAULT_EPS, candidates: DEFAULT_CANDIDATES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplerKind {
    Systematic,
    Uniform,
    Heuristic(GuidedParams),
}

impl SamplerKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            SamplerKind::Systematic => "s",
            SamplerKind::Uniform => "u",
            SamplerKind::Heuristic(_) => "h",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Control values are rounded to this many decimals; 0 disables snapping.
    pub grid_digits: u32,
    pub reject_budget: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { kind: SamplerKind::Uniform, grid_digits: DEFAULT_GRID_DIGITS, reject_budget: DEFAULT_REJECT_BUDGET }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SamplerConfigError {
    #[error("beta must be positive, got {0}")]
    Beta(f64),
    #[error("epsilon must be positive, got {0}")]
    Eps(f64),
    #[error("candidate count must be at least 1")]
    Candidates,
    #[error("rejection budget must be at least 1")]
    Budget,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind) -> Self {
        SamplerConfig { kind, ..Default::default() }
    }

    pub fn check(&self) -> Result<(), SamplerConfigError> {
        if self.reject_budget == 0 {
            return Err(SamplerConfigError::Budget);
        }
        if let SamplerKind::Heuristic(g) = self.kind {
            if g.beta.is_nan() || g.beta <= 0.0 {
                return Err(SamplerConfigError::Beta(g.beta));
            }
            if g.eps.is_nan() || g.eps <= 0.0 {
                return Err(SamplerConfigError::Eps(g.eps));
            }
            if g.candidates == 0 {
                return Err(SamplerConfigError::Candidates);
            }
        }
        Ok(())
    }
}

/// Sampling bookkeeping attached to one search node.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeSamplerState {
    counter: u64,
    tried: Vec<bool>,
    exhausted: bool,
}

impl NodeSamplerState {
    /// Number of (action, controls) pairs drawn at this node so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Whether a finite decision set has been fully tried.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleOutcome {
    Success { decision: Decision, successor: State },
    Failure,
}

impl SampleOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, SampleOutcome::Success { .. })
    }
}

/// Per-problem view of the decision space shared by all nodes of a search.
#[derive(Debug, Clone)]
pub struct DecisionSpace<'p> {
    problem: &'p Problem,
    finite: bool,
}

impl<'p> DecisionSpace<'p> {
    pub fn new(problem: &'p Problem) -> Self {
        let finite = problem.actions.iter().all(|a| !a.uses_controls());
        DecisionSpace { problem, finite }
    }

    pub fn problem(&self) -> &'p Problem {
        self.problem
    }

    /// True when every action ignores the control variables, so each state
    /// has at most `|A|` distinct decisions.
    pub fn is_finite(&self) -> bool {
        self.finite
    }

    fn try_decision(&self, s: &State, action: usize, controls: ControlValuation) -> Option<SampleOutcome> {
        let a = &self.problem.actions[action];
        // structural errors are ruled out by validation; treat them as inapplicable
        if !applicable(s, a, &controls).unwrap_or(false) {
            return None;
        }
        let successor = apply_effects(s, a, &controls).ok()?;
        Some(SampleOutcome::Success { decision: Decision { action, controls }, successor })
    }

    fn init_tried(&self, node: &mut NodeSamplerState) {
        if self.finite && node.tried.len() != self.problem.actions.len() {
            node.tried = vec![false; self.problem.actions.len()];
        }
    }
}

/// Rounds `v` to `digits` decimals (if nonzero) and clamps it into the
/// control interval.
pub fn snap(v: f64, digits: u32, spec: &ControlVarSpec) -> f64 {
    let v = if digits == 0 {
        v
    } else {
        let scale = 10f64.powi(digits.min(i32::MAX as u32) as i32);
        (v * scale).round() / scale
    };
    v.clamp(spec.lower as f64, spec.upper as f64)
}

fn uniform_controls<R: Rng + ?Sized>(p: &Problem, rng: &mut R, digits: u32) -> ControlValuation {
    ControlValuation(
        p.controls
            .iter()
            .map(|c| snap(rng.gen_range(c.lower as f64..=c.upper as f64), digits, c))
            .collect(),
    )
}

/// Rejection sampling with uniform action and control choice. In a finite
/// space `commit` decides whether a successful draw is marked as tried.
fn uniform_draw<R: Rng + ?Sized>(
    space: &DecisionSpace<'_>,
    s: &State,
    node: &mut NodeSamplerState,
    rng: &mut R,
    digits: u32,
    budget: u32,
    commit: bool,
) -> SampleOutcome {
    let p = space.problem;
    if p.actions.is_empty() {
        node.exhausted = true;
        return SampleOutcome::Failure;
    }
    space.init_tried(node);
    for _ in 0..budget {
        let action = if space.finite {
            let untried: Vec<usize> = (0..p.actions.len()).filter(|&i| !node.tried[i]).collect();
            if untried.is_empty() {
                node.exhausted = true;
                return SampleOutcome::Failure;
            }
            untried[rng.gen_range(0..untried.len())]
        } else {
            rng.gen_range(0..p.actions.len())
        };
        let controls = uniform_controls(p, rng, digits);
        node.counter += 1;
        match space.try_decision(s, action, controls) {
            Some(outcome) => {
                if space.finite && commit {
                    node.tried[action] = true;
                    node.exhausted = node.tried.iter().all(|&t| t);
                }
                return outcome;
            }
            None => {
                if space.finite {
                    // control-free preconditions are deterministic
                    node.tried[action] = true;
                    node.exhausted = node.tried.iter().all(|&t| t);
                }
            }
        }
    }
    SampleOutcome::Failure
}

/// Uniform sampler: up to `budget` draws of a uniform action and uniform
/// controls; the first applicable pair wins.
pub fn sample_uniform<R: Rng + ?Sized>(
    space: &DecisionSpace<'_>,
    s: &State,
    node: &mut NodeSamplerState,
    rng: &mut R,
    grid_digits: u32,
    budget: u32,
) -> SampleOutcome {
    uniform_draw(space, s, node, rng, grid_digits, budget, true)
}

/// Systematic sampler. The node counter `i` selects action `i mod |A|` and
/// the `(i div |A|)`-th point of the dyadic control grid; inapplicable
/// pairs consume counter values and budget.
pub fn sample_systematic(
    space: &DecisionSpace<'_>,
    s: &State,
    node: &mut NodeSamplerState,
    grid_digits: u32,
    budget: u32,
) -> SampleOutcome {
    let p = space.problem;
    let n_actions = p.actions.len() as u64;
    if n_actions == 0 {
        node.exhausted = true;
        return SampleOutcome::Failure;
    }
    let mut used = 0;
    while used < budget {
        if space.finite && node.counter >= n_actions {
            node.exhausted = true;
            return SampleOutcome::Failure;
        }
        let i = node.counter;
        node.counter += 1;
        let action = (i % n_actions) as usize;
        let round = i / n_actions;
        if round > 0 && !p.actions[action].uses_controls() {
            // only the first visit of a control-free action is a new decision
            continue;
        }
        used += 1;
        let point = nth_grid_point(p.controls.len(), round);
        let controls = ControlValuation(
            p.controls
                .iter()
                .zip(point)
                .map(|(c, j)| snap(c.lower as f64 + dyadic_value(j) * c.width(), grid_digits, c))
                .collect(),
        );
        if let Some(outcome) = space.try_decision(s, action, controls) {
            if space.finite && node.counter >= n_actions {
                node.exhausted = true;
            }
            return outcome;
        }
    }
    if space.finite && node.counter >= n_actions {
        node.exhausted = true;
    }
    SampleOutcome::Failure
}

/// Heuristic-guided sampler: draws `N` candidates with uniform semantics and
/// picks one with probability proportional to `(1 / (h(s') + ε))^β`.
#[allow(clippy::too_many_arguments)]
pub fn sample_heuristic<R: Rng + ?Sized>(
    space: &DecisionSpace<'_>,
    s: &State,
    node: &mut NodeSamplerState,
    h: &dyn Heuristic,
    params: GuidedParams,
    rng: &mut R,
    grid_digits: u32,
    budget: u32,
) -> SampleOutcome {
    let mut candidates = Vec::with_capacity(params.candidates as usize);
    for _ in 0..params.candidates.max(1) {
        match uniform_draw(space, s, node, rng, grid_digits, budget, false) {
            SampleOutcome::Success { decision, successor } => candidates.push((decision, successor)),
            // a spent budget or an exhausted node will not produce more
            SampleOutcome::Failure => break,
        }
    }
    if candidates.is_empty() {
        return SampleOutcome::Failure;
    }
    let h_values: Vec<f64> = candidates.iter().map(|(_, succ)| h.estimate(succ)).collect();
    let pick = pick_guided(&h_values, params, rng);
    let (decision, successor) = candidates.swap_remove(pick);
    if space.finite {
        space.init_tried(node);
        node.tried[decision.action] = true;
        node.exhausted = node.tried.iter().all(|&t| t);
    }
    SampleOutcome::Success { decision, successor }
}

/// Categorical draw over candidates with weights `(1/(h_i+ε))^β`, computed
/// in log space so that tiny `ε` or large `β` cannot overflow.
pub fn pick_guided<R: Rng + ?Sized>(h_values: &[f64], params: GuidedParams, rng: &mut R) -> usize {
    let log_weights: Vec<f64> = h_values.iter().map(|h| -params.beta * (h + params.eps).ln()).collect();
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|w| (w - top).exp()).collect();
    WeightedIndex::new(&weights).map(|d| d.sample(rng)).unwrap_or(0)
}

/// Normalized selection probabilities `(1/(h_i+ε))^β / Σ_j (1/(h_j+ε))^β`.
pub fn guided_probabilities(h_values: &[f64], beta: f64, eps: f64) -> Vec<f64> {
    let w: Vec<f64> = h_values.iter().map(|h| (1.0 / (h + eps)).powf(beta)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// A configured sampler bound to one problem.
pub struct Sampler<'p> {
    space: DecisionSpace<'p>,
    cfg: SamplerConfig,
}

impl<'p> Sampler<'p> {
    pub fn new(problem: &'p Problem, cfg: SamplerConfig) -> Result<Self, SamplerConfigError> {
        cfg.check()?;
        Ok(Sampler { space: DecisionSpace::new(problem), cfg })
    }

    pub fn space(&self) -> &DecisionSpace<'p> {
        &self.space
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn sample<R: Rng + ?Sized>(
        &self,
        s: &State,
        node: &mut NodeSamplerState,
        h: &dyn Heuristic,
        rng: &mut R,
    ) -> SampleOutcome {
        let SamplerConfig { kind, grid_digits, reject_budget } = self.cfg;
        match kind {
            SamplerKind::Systematic => sample_systematic(&self.space, s, node, grid_digits, reject_budget),
            SamplerKind::Uniform => sample_uniform(&self.space, s, node, rng, grid_digits, reject_budget),
            SamplerKind::Heuristic(g) => {
                sample_heuristic(&self.space, s, node, h, g, rng, grid_digits, reject_budget)
            }
        }
    }
}

#[cfg(test)]
mod tests;
