//! Planning problems with control variables and their transition semantics.
//!
//! A [`Problem`] declares Boolean state variables, numeric state variables,
//! bounded control variables and a finite set of actions. Control variables
//! are chosen per decision and never stored in a [`State`]; a [`Decision`]
//! pairs an action with a [`ControlValuation`].

mod constraint;
mod expr;
mod state_key;

pub use constraint::{eval_constraint, Cmp, Constraint};
pub use expr::{eval_expr, Expr, VarRef};
pub use state_key::{state_key, StateKey, DEFAULT_KEY_DIGITS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unbound numeric variable {0:?}")]
    UnboundVariable(VarRef),
    #[error("unbound boolean variable #{0}")]
    UnboundBool(usize),
    #[error("action #{0} does not exist")]
    UnknownAction(usize),
    #[error("action `{0}` is not applicable under the given state and controls")]
    NotApplicable(String),
}

/// Valuation over the Boolean and numeric state variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct State {
    pub bools: Vec<bool>,
    pub nums: Vec<f64>,
}

impl State {
    pub fn new(bools: Vec<bool>, nums: Vec<f64>) -> Self {
        State { bools, nums }
    }
}

/// Values for the control variables, in declaration order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlValuation(pub Vec<f64>);

impl ControlValuation {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// An action index together with the control values it is applied with.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub action: usize,
    pub controls: ControlValuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlVarSpec {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

impl ControlVarSpec {
    pub fn new(name: impl Into<String>, lower: i64, upper: i64) -> Self {
        ControlVarSpec { name: name.into(), lower, upper }
    }

    pub fn width(&self) -> f64 {
        (self.upper - self.lower) as f64
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower as f64 && v <= self.upper as f64
    }
}

/// Effect set of an action. Right-hand sides are evaluated in the pre-state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Effect {
    pub bools: Vec<(usize, bool)>,
    pub nums: Vec<(usize, Expr)>,
}

impl Effect {
    pub fn is_empty(&self) -> bool {
        self.bools.is_empty() && self.nums.is_empty()
    }

    pub fn mentions_controls(&self) -> bool {
        self.nums.iter().any(|(_, e)| e.mentions_controls())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: String,
    pub pre: Constraint,
    pub eff: Effect,
}

impl Action {
    pub fn new(name: impl Into<String>, pre: Constraint, eff: Effect) -> Self {
        Action { name: name.into(), pre, eff }
    }

    /// Whether the control valuation can influence applicability or the
    /// successor. Actions that never read a control variable contribute a
    /// single decision per state.
    pub fn uses_controls(&self) -> bool {
        self.pre.mentions_controls() || self.eff.mentions_controls()
    }
}

/// A grounded planning problem `⟨F, X ∪ U, A, s₀, G⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub bools: Vec<String>,
    pub nums: Vec<String>,
    pub controls: Vec<ControlVarSpec>,
    pub actions: Vec<Action>,
    pub init: State,
    pub goal: Constraint,
}

impl Problem {
    pub fn action(&self, i: usize) -> Result<&Action, ModelError> {
        self.actions.get(i).ok_or(ModelError::UnknownAction(i))
    }

    pub fn bool_index(&self, name: &str) -> Option<usize> {
        self.bools.iter().position(|n| n == name)
    }

    pub fn num_index(&self, name: &str) -> Option<usize> {
        self.nums.iter().position(|n| n == name)
    }

    pub fn control_index(&self, name: &str) -> Option<usize> {
        self.controls.iter().position(|c| c.name == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    /// Whether `mu` assigns every control variable a value inside its bounds.
    pub fn controls_in_bounds(&self, mu: &ControlValuation) -> bool {
        mu.0.len() == self.controls.len()
            && self.controls.iter().zip(&mu.0).all(|(spec, &v)| spec.contains(v))
    }
}

/// `(s, mu) ⊨ Pre(a)`.
pub fn applicable(s: &State, a: &Action, mu: &ControlValuation) -> Result<bool, ModelError> {
    eval_constraint(&a.pre, s, mu)
}

/// Successor of `s` under `⟨a, mu⟩`. Fails if the decision is not applicable.
pub fn apply(s: &State, a: &Action, mu: &ControlValuation) -> Result<State, ModelError> {
    if !applicable(s, a, mu)? {
        return Err(ModelError::NotApplicable(a.name.clone()));
    }
    apply_effects(s, a, mu)
}

/// Applies the effects of `a` without checking its precondition.
pub(crate) fn apply_effects(s: &State, a: &Action, mu: &ControlValuation) -> Result<State, ModelError> {
    let mut next = s.clone();
    for (target, rhs) in &a.eff.nums {
        let v = eval_expr(rhs, s, mu)?;
        *next
            .nums
            .get_mut(*target)
            .ok_or(ModelError::UnboundVariable(VarRef::Num(*target)))? = v;
    }
    for (target, b) in &a.eff.bools {
        *next.bools.get_mut(*target).ok_or(ModelError::UnboundBool(*target))? = *b;
    }
    Ok(next)
}

/// `s ⊨ G`. Goal constraints carry no control variables.
pub fn goal_test(s: &State, goal: &Constraint) -> Result<bool, ModelError> {
    eval_constraint(goal, s, &ControlValuation::default())
}

/// Replays `plan` from the initial state and returns the visited states,
/// starting with `s₀`. Fails on the first inapplicable step.
pub fn replay(p: &Problem, plan: &[Decision]) -> Result<Vec<State>, ModelError> {
    let mut states = vec![p.init.clone()];
    for d in plan {
        let a = p.action(d.action)?;
        let next = apply(states.last().expect("nonempty"), a, &d.controls)?;
        states.push(next);
    }
    Ok(states)
}

/// Whether `plan` is a solution: every step applicable, controls within
/// bounds and the final state satisfies the goal.
pub fn is_solution(p: &Problem, plan: &[Decision]) -> bool {
    if !plan.iter().all(|d| p.controls_in_bounds(&d.controls)) {
        return false;
    }
    match replay(p, plan) {
        Ok(states) => goal_test(states.last().expect("nonempty"), &p.goal).unwrap_or(false),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(v: &[f64]) -> ControlValuation {
        ControlValuation(v.to_vec())
    }

    fn inc_action(limit: f64) -> Action {
        // pre: x + u <= limit, eff: x := x + u
        Action::new(
            "inc",
            Constraint::compare_sides(Expr::add(Expr::num(0), Expr::control(0)), Cmp::Le, Expr::Const(limit)),
            Effect { bools: vec![], nums: vec![(0, Expr::add(Expr::num(0), Expr::control(0)))] },
        )
    }

    #[test]
    fn trivial_precondition_is_applicable() {
        let a = Action::new("noop", Constraint::truth(), Effect::default());
        assert!(applicable(&State::new(vec![], vec![3.0]), &a, &mu(&[0.7])).unwrap());
    }

    #[test]
    fn le_boundary_and_violation() {
        let a = inc_action(10.0);
        let s = State::new(vec![], vec![9.5]);
        assert!(applicable(&s, &a, &mu(&[0.5])).unwrap());
        assert!(!applicable(&s, &a, &mu(&[0.6])).unwrap());
    }

    #[test]
    fn apply_increments_and_preserves_rest() {
        let a = inc_action(10.0);
        let s = State::new(vec![true], vec![1.0, 42.0]);
        let before = s.clone();
        let next = apply(&s, &a, &mu(&[0.5])).unwrap();
        assert_eq!(next.nums, vec![1.5, 42.0]);
        assert_eq!(next.bools, vec![true]);
        assert_eq!(s, before);
    }

    #[test]
    fn simultaneous_swap() {
        let a = Action::new(
            "swap",
            Constraint::truth(),
            Effect { bools: vec![], nums: vec![(0, Expr::num(1)), (1, Expr::num(0))] },
        );
        let s = State::new(vec![], vec![1.0, 2.0]);
        let once = apply(&s, &a, &mu(&[])).unwrap();
        assert_eq!(once.nums, vec![2.0, 1.0]);
        let twice = apply(&once, &a, &mu(&[])).unwrap();
        assert_eq!(twice, s);
    }

    #[test]
    fn empty_effect_is_identity() {
        let a = Action::new("noop", Constraint::truth(), Effect::default());
        let s = State::new(vec![false, true], vec![0.25]);
        assert_eq!(apply(&s, &a, &mu(&[])).unwrap(), s);
    }

    #[test]
    fn apply_rejects_inapplicable() {
        let a = inc_action(10.0);
        let s = State::new(vec![], vec![9.5]);
        assert_eq!(apply(&s, &a, &mu(&[0.6])), Err(ModelError::NotApplicable("inc".into())));
    }

    #[test]
    fn goal_boundary_and_failing_conjunct() {
        let ge5 = Constraint::compare_sides(Expr::num(0), Cmp::Ge, Expr::Const(5.0));
        assert!(goal_test(&State::new(vec![], vec![5.0]), &ge5).unwrap());
        let both = Constraint::And(vec![ge5, Constraint::BoolEq(0, true)]);
        assert!(!goal_test(&State::new(vec![false], vec![6.0]), &both).unwrap());
    }

    #[test]
    fn replay_checks_each_step() {
        let p = Problem {
            name: "t".into(),
            bools: vec![],
            nums: vec!["x".into()],
            controls: vec![ControlVarSpec::new("u", 0, 1)],
            actions: vec![inc_action(1.0)],
            init: State::new(vec![], vec![0.0]),
            goal: Constraint::compare_sides(Expr::num(0), Cmp::Ge, Expr::Const(1.0)),
        };
        let step = |u: f64| Decision { action: 0, controls: mu(&[u]) };
        assert!(is_solution(&p, &[step(0.5), step(0.5)]));
        assert!(!is_solution(&p, &[step(0.5)]));
        assert!(!is_solution(&p, &[step(0.7), step(0.7)]));
        // out of the control box
        assert!(!is_solution(&p, &[step(1.5)]));
    }
}
