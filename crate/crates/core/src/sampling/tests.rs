use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dsl::parse_problem;
use crate::heuristics::GoalCounting;
use crate::model::apply;

fn problem(text: &str) -> Problem {
    parse_problem(text).unwrap()
}

fn single_action(lo: i64, hi: i64) -> Problem {
    problem(&format!(
        "(problem p (bools) (nums (x 0)) (controls (u {lo} {hi})) (action set (pre (and)) (eff (assign x u))) (goal (and)))"
    ))
}

const COUNTERS2: &str = "(problem counters-2 (bools) (nums (c0 0.0) (c1 0.0)) (controls (u 0 1))
  (action inc-c0 (pre (<= (+ c0 u) 10)) (eff (assign c0 (+ c0 u))))
  (action dec-c0 (pre (>= (- c0 u) 0)) (eff (assign c0 (- c0 u))))
  (action inc-c1 (pre (<= (+ c1 u) 10)) (eff (assign c1 (+ c1 u))))
  (action dec-c1 (pre (>= (- c1 u) 0)) (eff (assign c1 (- c1 u))))
  (goal (and (>= (- c1 (+ c0 1)) 0))))";

fn controls_of(o: &SampleOutcome) -> Vec<f64> {
    match o {
        SampleOutcome::Success { decision, .. } => decision.controls.0.clone(),
        SampleOutcome::Failure => panic!("expected a decision"),
    }
}

fn action_of(o: &SampleOutcome) -> usize {
    match o {
        SampleOutcome::Success { decision, .. } => decision.action,
        SampleOutcome::Failure => panic!("expected a decision"),
    }
}

#[test]
fn uniform_without_rejection() {
    let p = single_action(0, 1);
    let space = DecisionSpace::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let mut node = NodeSamplerState::default();
        let out = sample_uniform(&space, &p.init, &mut node, &mut rng, 0, 100);
        let u = controls_of(&out)[0];
        assert!((0.0..=1.0).contains(&u));
        assert_eq!(node.counter(), 1);
    }
}

#[test]
fn uniform_fails_after_exact_budget() {
    let p = problem(
        "(problem p (bools) (nums (x 0)) (controls (u 0 1)) (action a (pre (> (+ x u) 5)) (eff (assign x u))) (goal (and)))",
    );
    let space = DecisionSpace::new(&p);
    let mut node = NodeSamplerState::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    assert_eq!(sample_uniform(&space, &p.init, &mut node, &mut rng, 3, 37), SampleOutcome::Failure);
    assert_eq!(node.counter(), 37);
    assert!(!node.exhausted());
}

#[test]
fn uniform_on_counters_prefers_increments() {
    let p = problem(COUNTERS2);
    let space = DecisionSpace::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut hits = [0usize; 4];
    let draws = 10_000;
    for _ in 0..draws {
        let mut node = NodeSamplerState::default();
        let out = sample_uniform(&space, &p.init, &mut node, &mut rng, 3, 100);
        let a = action_of(&out);
        if a == 1 || a == 3 {
            // a decrement from zero is only applicable at u = 0
            assert_eq!(controls_of(&out)[0], 0.0);
        }
        hits[a] += 1;
    }
    assert!(hits[0] as f64 / draws as f64 >= 0.45, "{hits:?}");
    assert!(hits[2] as f64 / draws as f64 >= 0.45, "{hits:?}");
}

#[test]
fn successes_are_sound() {
    let p = problem(COUNTERS2);
    let space = DecisionSpace::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = State::new(vec![], vec![0.4, 9.7]);
    let h = GoalCounting::new(&p.goal);
    for kind in [SamplerKind::Systematic, SamplerKind::Uniform, SamplerKind::Heuristic(GuidedParams::default())] {
        let sampler = Sampler::new(&p, SamplerConfig::new(kind)).unwrap();
        let mut node = NodeSamplerState::default();
        for _ in 0..200 {
            if let SampleOutcome::Success { decision, successor } = sampler.sample(&s, &mut node, &h, &mut rng) {
                let a = &p.actions[decision.action];
                assert!(p.controls_in_bounds(&decision.controls));
                assert_eq!(apply(&s, a, &decision.controls).unwrap(), successor);
            }
        }
    }
    let _ = space;
}

#[test]
fn systematic_unit_interval() {
    let p = single_action(0, 1);
    let space = DecisionSpace::new(&p);
    let mut node = NodeSamplerState::default();
    let us: Vec<f64> = (0..5).map(|_| controls_of(&sample_systematic(&space, &p.init, &mut node, 0, 100))[0]).collect();
    assert_eq!(us, vec![0.0, 1.0, 0.5, 0.25, 0.75]);
}

#[test]
fn systematic_affine_interval() {
    let p = single_action(2, 4);
    let space = DecisionSpace::new(&p);
    let mut node = NodeSamplerState::default();
    let us: Vec<f64> = (0..3).map(|_| controls_of(&sample_systematic(&space, &p.init, &mut node, 0, 100))[0]).collect();
    assert_eq!(us, vec![2.0, 4.0, 3.0]);
}

#[test]
fn systematic_round_robin() {
    let p = problem(
        "(problem p (bools) (nums (x 0) (y 0)) (controls (u 0 1))
          (action a0 (pre (and)) (eff (assign x u)))
          (action a1 (pre (and)) (eff (assign y u)))
          (goal (and)))",
    );
    let space = DecisionSpace::new(&p);
    let mut node = NodeSamplerState::default();
    let outs: Vec<SampleOutcome> = (0..4).map(|_| sample_systematic(&space, &p.init, &mut node, 0, 100)).collect();
    assert_eq!(outs.iter().map(action_of).collect::<Vec<_>>(), vec![0, 1, 0, 1]);
    assert_eq!(outs.iter().map(|o| controls_of(o)[0]).collect::<Vec<_>>(), vec![0.0, 0.0, 1.0, 1.0]);
}

#[test]
fn systematic_is_deterministic() {
    let p = problem(COUNTERS2);
    let space = DecisionSpace::new(&p);
    let run = || {
        let mut node = NodeSamplerState::default();
        (0..50).map(|_| sample_systematic(&space, &p.init, &mut node, 3, 100)).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn systematic_skips_inapplicable_consuming_counter() {
    // at zero only increments apply (decrements need u = 0, which comes first)
    let p = problem(COUNTERS2);
    let space = DecisionSpace::new(&p);
    let mut node = NodeSamplerState::default();
    let mut seq = Vec::new();
    for _ in 0..6 {
        let o = sample_systematic(&space, &p.init, &mut node, 0, 100);
        seq.push((action_of(&o), controls_of(&o)[0]));
    }
    // round 0 (u=0): all four apply; round 1 (u=1): only increments
    assert_eq!(seq, vec![(0, 0.0), (1, 0.0), (2, 0.0), (3, 0.0), (0, 1.0), (2, 1.0)]);
    assert_eq!(node.counter(), 7);
}

#[test]
fn finite_space_is_sampled_without_replacement() {
    let p = problem(
        "(problem p (bools a b c) (nums) (controls)
          (action sa (pre (and)) (eff (set a true)))
          (action sb (pre (= a true)) (eff (set b true)))
          (action sc (pre (and)) (eff (set c true)))
          (goal (and)))",
    );
    let space = DecisionSpace::new(&p);
    assert!(space.is_finite());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut node = NodeSamplerState::default();
    let mut seen = Vec::new();
    while let SampleOutcome::Success { decision, .. } = sample_uniform(&space, &p.init, &mut node, &mut rng, 0, 100) {
        seen.push(decision.action);
    }
    seen.sort();
    // `sb` is inapplicable initially
    assert_eq!(seen, vec![0, 2]);
    assert!(node.exhausted());

    let mut node = NodeSamplerState::default();
    let mut order = Vec::new();
    while let SampleOutcome::Success { decision, .. } = sample_systematic(&space, &p.init, &mut node, 0, 100) {
        order.push(decision.action);
        if node.exhausted() {
            break;
        }
    }
    assert_eq!(order, vec![0, 2]);
    assert!(node.exhausted());
}

#[test]
fn guided_two_candidate_probabilities() {
    let probs = guided_probabilities(&[0.0, 9.0], 1.0, 1.0);
    assert!((probs[0] - 10.0 / 11.0).abs() < 1e-12);
    assert!((probs[1] - 1.0 / 11.0).abs() < 1e-12);
    let uniform = guided_probabilities(&[2.0; 4], 1.0, 1e-6);
    assert!(uniform.iter().all(|p| (p - 0.25).abs() < 1e-12));
}

#[test]
fn guided_single_candidate_always_selected() {
    let p = single_action(0, 1);
    let space = DecisionSpace::new(&p);
    let h = GoalCounting::new(&p.goal);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let params = GuidedParams { candidates: 1, ..Default::default() };
    for _ in 0..100 {
        let mut node = NodeSamplerState::default();
        let out = sample_heuristic(&space, &p.init, &mut node, &h, params, &mut rng, 0, 100);
        assert!(out.is_success());
        assert_eq!(node.counter(), 1);
        assert_eq!(pick_guided(&[42.0], params, &mut rng), 0);
    }
}

#[test]
fn guided_pick_handles_extreme_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = GuidedParams { beta: 500.0, eps: 1e-300, candidates: 2 };
    for _ in 0..50 {
        assert_eq!(pick_guided(&[0.0, 1.0], params, &mut rng), 0);
    }
}

#[test]
fn config_checks() {
    let bad = |g: GuidedParams| SamplerConfig::new(SamplerKind::Heuristic(g)).check();
    assert_eq!(bad(GuidedParams { beta: 0.0, ..Default::default() }), Err(SamplerConfigError::Beta(0.0)));
    assert_eq!(bad(GuidedParams { eps: -1.0, ..Default::default() }), Err(SamplerConfigError::Eps(-1.0)));
    assert_eq!(bad(GuidedParams { candidates: 0, ..Default::default() }), Err(SamplerConfigError::Candidates));
    let cfg = SamplerConfig { reject_budget: 0, ..Default::default() };
    assert_eq!(cfg.check(), Err(SamplerConfigError::Budget));
}

#[test]
fn snapping() {
    let spec = ControlVarSpec::new("u", -1, 1);
    assert_eq!(snap(0.12349, 3, &spec), 0.123);
    assert_eq!(snap(0.9996, 3, &spec), 1.0);
    assert_eq!(snap(0.123456, 0, &spec), 0.123456);
    assert_eq!(snap(1.0004, 3, &spec), 1.0);
}
