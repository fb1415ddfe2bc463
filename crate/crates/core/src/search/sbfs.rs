use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::checks::{check_node_f, prop1_on_path, thm2_bound_holds};
use super::open::OpenList;
use super::rectify::{nec, EvalMode, Rectifier};
use super::result::{Outcome, SearchResult, SearchStats};
use super::tree::{NodeId, NodeStatus, SearchNode, SearchTree};
use super::SearchError;
use crate::heuristics::{by_name, Heuristic};
use crate::model::{goal_test, state_key, Problem, StateKey, DEFAULT_KEY_DIGITS};
use crate::sampling::{NodeSamplerState, SampleOutcome, Sampler, SamplerConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub mode: EvalMode,
    pub rectifier: Rectifier,
    pub sampler: SamplerConfig,
    pub heuristic: String,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub expansion_limit: Option<u64>,
    pub dup_detect: bool,
    pub assertions: bool,
    /// Decimal digits of the canonical state key used for duplicate detection.
    pub key_digits: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: EvalMode::Greedy,
            rectifier: Rectifier::Logarithmic,
            sampler: SamplerConfig::default(),
            heuristic: "gc".into(),
            seed: 0,
            time_limit: None,
            expansion_limit: None,
            dup_detect: true,
            assertions: false,
            key_digits: DEFAULT_KEY_DIGITS,
        }
    }
}

impl SearchConfig {
    pub fn check(&self) -> Result<(), SearchError> {
        if let Some(t) = self.time_limit {
            if t.is_zero() {
                return Err(SearchError::Config("time limit must be positive".into()));
            }
        }
        if self.expansion_limit == Some(0) {
            return Err(SearchError::Config("expansion limit must be positive".into()));
        }
        self.sampler.check()?;
        Ok(())
    }
}

/// What happened to the successor drawn during one expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleEvent {
    Inserted(NodeId),
    Duplicate,
    Failure,
}

/// Instrumentation events, emitted in the order they occur.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Extract { node: NodeId, f: f64 },
    GoalTest { node: NodeId, satisfied: bool },
    Sample { node: NodeId, result: SampleEvent },
    Insert { node: NodeId, f: f64 },
    Reinsert { node: NodeId, f: f64 },
    Drop { node: NodeId },
    Done { outcome: Outcome },
}

pub trait SearchObserver {
    fn event(&mut self, ev: &TraceEvent);
}

impl SearchObserver for () {
    fn event(&mut self, _: &TraceEvent) {}
}

impl SearchObserver for Vec<TraceEvent> {
    fn event(&mut self, ev: &TraceEvent) {
        self.push(ev.clone());
    }
}

/// Sampling best-first search. Each call to [`Sbfs::step`] performs one
/// iteration: extract, goal test, one sample, rectify and reinsert.
pub struct Sbfs<'p> {
    problem: &'p Problem,
    cfg: SearchConfig,
    heuristic: Box<dyn Heuristic + 'p>,
    sampler: Sampler<'p>,
    rng: ChaCha8Rng,
    tree: SearchTree,
    open: OpenList,
    seen: HashSet<StateKey>,
    stats: SearchStats,
    started: Instant,
    finished: Option<(Outcome, Option<NodeId>)>,
}

impl<'p> Sbfs<'p> {
    pub fn new(problem: &'p Problem, cfg: SearchConfig) -> Result<Self, SearchError> {
        let h = by_name(&cfg.heuristic, problem)?;
        Self::with_heuristic(problem, cfg, h)
    }

    pub fn with_heuristic(
        problem: &'p Problem,
        cfg: SearchConfig,
        heuristic: Box<dyn Heuristic + 'p>,
    ) -> Result<Self, SearchError> {
        cfg.check()?;
        let sampler = Sampler::new(problem, cfg.sampler)?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut engine = Sbfs {
            problem,
            heuristic,
            sampler,
            rng,
            tree: SearchTree::new(),
            open: OpenList::new(),
            seen: HashSet::new(),
            stats: SearchStats::default(),
            started: Instant::now(),
            finished: None,
            cfg,
        };
        let s0 = problem.init.clone();
        let key = engine.key_of(&s0);
        let h = engine.heuristic.estimate(&s0);
        let f = nec(engine.cfg.mode, engine.cfg.rectifier, 0.0, h, 0);
        if let Some(k) = &key {
            engine.seen.insert(k.clone());
        }
        let root = engine.tree.push(SearchNode {
            state: s0,
            key,
            g: 0,
            h,
            n: 0,
            f,
            f_selected: None,
            parent: None,
            sampler: NodeSamplerState::default(),
            children: Vec::new(),
            status: NodeStatus::Open,
        });
        engine.open.push(root, f);
        engine.stats.generated = 1;
        engine.stats.peak_open = 1;
        Ok(engine)
    }

    fn key_of(&self, s: &crate::model::State) -> Option<StateKey> {
        self.cfg.dup_detect.then(|| state_key(s, self.cfg.key_digits))
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn tree(&self) -> &SearchTree {
        &self.tree
    }

    pub fn open(&self) -> &OpenList {
        &self.open
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn heuristic(&self) -> &dyn Heuristic {
        self.heuristic.as_ref()
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.finished.map(|(o, _)| o)
    }

    fn finish(&mut self, outcome: Outcome, goal: Option<NodeId>, obs: &mut dyn SearchObserver) -> Outcome {
        self.finished = Some((outcome, goal));
        obs.event(&TraceEvent::Done { outcome });
        outcome
    }

    fn limit_hit(&self) -> Option<Outcome> {
        if self.cfg.expansion_limit.is_some_and(|l| self.stats.expansions >= l) {
            return Some(Outcome::Budget);
        }
        if self.cfg.time_limit.is_some_and(|t| self.started.elapsed() >= t) {
            return Some(Outcome::Timeout);
        }
        None
    }

    /// Runs one iteration. Returns the outcome once the search has ended.
    pub fn step(&mut self, obs: &mut dyn SearchObserver) -> Result<Option<Outcome>, SearchError> {
        if let Some((o, _)) = self.finished {
            return Ok(Some(o));
        }
        if let Some(o) = self.limit_hit() {
            return Ok(Some(self.finish(o, None, obs)));
        }
        let Some((id, f)) = self.open.pop() else {
            return Ok(Some(self.finish(Outcome::Exhausted, None, obs)));
        };
        obs.event(&TraceEvent::Extract { node: id, f });

        let satisfied = goal_test(&self.tree.get(id).state, &self.problem.goal)?;
        obs.event(&TraceEvent::GoalTest { node: id, satisfied });
        if satisfied {
            self.tree.get_mut(id).status = NodeStatus::Goal;
            if self.cfg.assertions && self.cfg.mode == EvalMode::Additive {
                let root = self.tree.get(SearchTree::ROOT);
                let len = self.tree.get(id).g as usize;
                if !thm2_bound_holds(len, root.h, self.cfg.rectifier, root.n) {
                    return Err(SearchError::Contract(format!(
                        "solution of length {len} exceeds the root bound {}",
                        self.cfg.rectifier.rectify(root.h, root.n)
                    )));
                }
            }
            return Ok(Some(self.finish(Outcome::Solved, Some(id), obs)));
        }

        self.stats.expansions += 1;
        let (mut sampler_state, n_before, g, h, state) = {
            let node = self.tree.get_mut(id);
            node.f_selected = Some(f);
            (std::mem::take(&mut node.sampler), node.n, node.g, node.h, node.state.clone())
        };
        if n_before > 0 {
            self.stats.reexpansions += 1;
        }

        let drawn = self.sampler.sample(&state, &mut sampler_state, self.heuristic.as_ref(), &mut self.rng);
        let exhausted = sampler_state.exhausted();
        self.tree.get_mut(id).sampler = sampler_state;

        let result = match drawn {
            SampleOutcome::Failure => SampleEvent::Failure,
            SampleOutcome::Success { decision, successor } => {
                let key = self.key_of(&successor);
                if key.as_ref().is_some_and(|k| !self.seen.insert(k.clone())) {
                    SampleEvent::Duplicate
                } else {
                    let sh = self.heuristic.estimate(&successor);
                    let sf = nec(self.cfg.mode, self.cfg.rectifier, f64::from(g + 1), sh, 0);
                    let child = self.tree.push(SearchNode {
                        state: successor,
                        key,
                        g: g + 1,
                        h: sh,
                        n: 0,
                        f: sf,
                        f_selected: None,
                        parent: Some((id, decision)),
                        sampler: NodeSamplerState::default(),
                        children: Vec::new(),
                        status: NodeStatus::Open,
                    });
                    self.stats.generated += 1;
                    SampleEvent::Inserted(child)
                }
            }
        };
        obs.event(&TraceEvent::Sample { node: id, result });
        if let SampleEvent::Inserted(child) = result {
            let cf = self.tree.get(child).f;
            self.open.push(child, cf);
            obs.event(&TraceEvent::Insert { node: child, f: cf });
        }

        let new_f = nec(self.cfg.mode, self.cfg.rectifier, f64::from(g), h, n_before + 1);
        {
            let node = self.tree.get_mut(id);
            node.n = n_before + 1;
            node.f = new_f;
            if exhausted {
                node.status = NodeStatus::Dropped;
            }
        }
        if exhausted {
            obs.event(&TraceEvent::Drop { node: id });
        } else {
            self.open.push(id, new_f);
            obs.event(&TraceEvent::Reinsert { node: id, f: new_f });
        }
        self.stats.peak_open = self.stats.peak_open.max(self.open.len());

        if self.cfg.assertions {
            self.check_iteration(id, result)?;
        }
        Ok(None)
    }

    // Only the touched nodes change, and ancestors' f never decreases, so
    // checking them is enough to keep every invariant.
    fn check_iteration(&self, id: NodeId, result: SampleEvent) -> Result<(), SearchError> {
        let (mode, rect) = (self.cfg.mode, self.cfg.rectifier);
        let mut touched = vec![id];
        if let SampleEvent::Inserted(c) = result {
            touched.push(c);
        }
        for t in touched {
            if !check_node_f(self.tree.get(t), mode, rect) {
                return Err(SearchError::Contract(format!("node {} has inconsistent f", t.0)));
            }
        }
        if let Some(anc) = prop1_on_path(&self.tree, id) {
            return Err(SearchError::Contract(format!(
                "node {} was selected above the f of its ancestor {}",
                id.0, anc.0
            )));
        }
        Ok(())
    }

    pub fn run(&mut self, obs: &mut dyn SearchObserver) -> Result<SearchResult, SearchError> {
        let outcome = loop {
            if let Some(o) = self.step(obs)? {
                break o;
            }
        };
        Ok(self.result_for(outcome))
    }

    fn result_for(&mut self, outcome: Outcome) -> SearchResult {
        let plan = match self.finished {
            Some((_, Some(goal))) => Some(self.tree.reconstruct_plan(goal)),
            _ => None,
        };
        let root = self.tree.get(SearchTree::ROOT);
        self.stats.root_n = root.n;
        self.stats.root_rh = self.cfg.rectifier.rectify(root.h, root.n);
        self.stats.wall_time = self.started.elapsed();
        SearchResult { outcome, plan, stats: self.stats.clone() }
    }
}

/// Runs S-BFS to completion.
pub fn sbfs_run(p: &Problem, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    Sbfs::new(p, cfg.clone())?.run(&mut ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_problem;
    use crate::model::is_solution;
    use crate::sampling::SamplerKind;

    const COUNTERS2: &str = "(problem counters-2 (bools) (nums (c0 0.0) (c1 0.0)) (controls (u 0 1))
      (action inc-c0 (pre (<= (+ c0 u) 10)) (eff (assign c0 (+ c0 u))))
      (action dec-c0 (pre (>= (- c0 u) 0)) (eff (assign c0 (- c0 u))))
      (action inc-c1 (pre (<= (+ c1 u) 10)) (eff (assign c1 (+ c1 u))))
      (action dec-c1 (pre (>= (- c1 u) 0)) (eff (assign c1 (- c1 u))))
      (goal (and (>= (- c1 (+ c0 1)) 0))))";

    fn cfg(mode: EvalMode, rect: Rectifier, kind: SamplerKind, seed: u64) -> SearchConfig {
        SearchConfig {
            mode,
            rectifier: rect,
            sampler: SamplerConfig::new(kind),
            seed,
            expansion_limit: Some(200_000),
            assertions: true,
            ..Default::default()
        }
    }

    #[test]
    fn goal_at_root() {
        let p = parse_problem("(problem p (bools) (nums (x 1)) (controls) (goal (>= x 0)))").unwrap();
        let r = sbfs_run(&p, &SearchConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Solved);
        assert_eq!(r.plan, Some(vec![]));
        assert_eq!(r.stats.expansions, 0);
    }

    #[test]
    fn counters2_solved_and_replays() {
        let p = parse_problem(COUNTERS2).unwrap();
        for mode in [EvalMode::Greedy, EvalMode::Additive] {
            let r = sbfs_run(&p, &cfg(mode, Rectifier::Logarithmic, SamplerKind::Uniform, 7)).unwrap();
            assert_eq!(r.outcome, Outcome::Solved);
            let plan = r.plan.unwrap();
            assert!(!plan.is_empty());
            assert!(is_solution(&p, &plan));
        }
    }

    #[test]
    fn unsatisfiable_precondition_hits_budget() {
        let p = parse_problem(
            "(problem p (bools) (nums (x 0)) (controls (u 0 2)) (action a (pre (>= u 5)) (eff (assign x u))) (goal (>= x 1)))",
        )
        .unwrap();
        let c = SearchConfig { expansion_limit: Some(1000), ..Default::default() };
        let mut engine = Sbfs::new(&p, c).unwrap();
        let r = engine.run(&mut ()).unwrap();
        assert_eq!(r.outcome, Outcome::Budget);
        assert_eq!(r.stats.generated, 1);
        assert_eq!(engine.tree().len(), 1);
        assert_eq!(r.stats.root_n, 1000);
        assert_eq!(r.stats.expansions, 1000);
        assert!((r.stats.reexp_rate() - 99.9).abs() < 1e-9);
    }

    #[test]
    fn finite_space_exhausts() {
        let p = parse_problem(
            "(problem p (bools a b) (nums) (controls)
              (action sa (pre (and)) (eff (set a true)))
              (action sb (pre (= a true)) (eff (set b true)))
              (goal (and (= a false) (= b true))))",
        )
        .unwrap();
        for kind in [SamplerKind::Systematic, SamplerKind::Uniform] {
            let r = sbfs_run(&p, &cfg(EvalMode::Greedy, Rectifier::Linear, kind, 1)).unwrap();
            assert_eq!(r.outcome, Outcome::Exhausted);
            // {}, {a}, {a,b}
            assert_eq!(r.stats.generated, 3);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = parse_problem(COUNTERS2).unwrap();
        let c = cfg(EvalMode::Greedy, Rectifier::Linear, SamplerKind::Heuristic(Default::default()), 3);
        let strip = |mut r: SearchResult| {
            r.stats.wall_time = Duration::ZERO;
            r
        };
        assert_eq!(strip(sbfs_run(&p, &c).unwrap()), strip(sbfs_run(&p, &c).unwrap()));
    }

    #[test]
    fn config_limits_must_be_positive() {
        let c = SearchConfig { expansion_limit: Some(0), ..Default::default() };
        assert!(c.check().is_err());
        let c = SearchConfig { time_limit: Some(Duration::ZERO), ..Default::default() };
        assert!(c.check().is_err());
    }
}
