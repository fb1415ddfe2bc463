use std::collections::HashSet;

use super::{Diagnostic, ProblemSpans, SourceSpan};
use crate::model::{Cmp, Constraint, Expr, Problem, VarRef};

/// Checks the side conditions of a problem: unique names, nondegenerate
/// control intervals, a total initial state, in-range references, no
/// control variables in the goal and at most one assignment per variable
/// per action.
///
/// Warnings flag preconditions that can never hold over the control box
/// (interval constant folding only), equalities on control variables, which
/// rejection sampling cannot satisfy, and goals that are not conjunctions.
pub fn validate(p: &Problem) -> Vec<Diagnostic> {
    validate_with_spans(p, None)
}

pub fn validate_with_spans(p: &Problem, spans: Option<&ProblemSpans>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let doc = spans.map(|s| s.document).unwrap_or_default();
    let at = |list: Option<&Vec<SourceSpan>>, i: usize| list.and_then(|l| l.get(i).copied()).unwrap_or(doc);
    let goal_span = spans.map(|s| s.goal).unwrap_or(doc);

    let mut names = HashSet::new();
    let decls = p
        .bools
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), at(spans.map(|s| &s.bools), i)))
        .chain(p.nums.iter().enumerate().map(|(i, n)| (n.as_str(), at(spans.map(|s| &s.nums), i))))
        .chain(p.controls.iter().enumerate().map(|(i, c)| (c.name.as_str(), at(spans.map(|s| &s.controls), i))));
    for (name, span) in decls {
        if !names.insert(name) {
            out.push(Diagnostic::error(format!("duplicate declaration of `{name}`"), span));
        }
    }
    let mut action_names = HashSet::new();
    for (i, a) in p.actions.iter().enumerate() {
        if !action_names.insert(a.name.as_str()) {
            out.push(Diagnostic::error(format!("duplicate action `{}`", a.name), at(spans.map(|s| &s.actions), i)));
        }
    }

    for (i, c) in p.controls.iter().enumerate() {
        if c.lower >= c.upper {
            out.push(Diagnostic::error(
                format!("control `{}`: lower bound must be < upper bound", c.name),
                at(spans.map(|s| &s.controls), i),
            ));
        }
    }

    if p.init.bools.len() != p.bools.len() || p.init.nums.len() != p.nums.len() {
        out.push(Diagnostic::error("initial state must assign every state variable exactly once", doc));
    }

    let refs_ok = |c: &Constraint, span: SourceSpan, allow_controls: bool, out: &mut Vec<Diagnostic>| {
        let mut bad = false;
        let mut control = false;
        c.visit_vars(&mut |v| match v {
            VarRef::Num(i) => bad |= i >= p.nums.len(),
            VarRef::Control(i) => {
                bad |= i >= p.controls.len();
                control = true;
            }
        });
        c.visit_bools(&mut |i| bad |= i >= p.bools.len());
        if bad {
            out.push(Diagnostic::error("reference to an undeclared variable", span));
        }
        if control && !allow_controls {
            out.push(Diagnostic::error("goal references a control variable", span));
        }
    };

    refs_ok(&p.goal, goal_span, false, &mut out);
    if !matches!(p.goal, Constraint::And(_)) {
        out.push(Diagnostic::warning(
            "goal is not a conjunction; goal counting treats it as a single conjunct",
            goal_span,
        ));
    }

    for (i, a) in p.actions.iter().enumerate() {
        let span = at(spans.map(|s| &s.actions), i);
        refs_ok(&a.pre, span, true, &mut out);

        let mut targets = HashSet::new();
        for (t, rhs) in &a.eff.nums {
            if *t >= p.nums.len() {
                out.push(Diagnostic::error(format!("action `{}` assigns an undeclared variable", a.name), span));
            } else if !targets.insert(("n", *t)) {
                out.push(Diagnostic::error(
                    format!("action `{}` assigns `{}` more than once", a.name, p.nums[*t]),
                    span,
                ));
            }
            let mut bad = false;
            rhs.visit_vars(&mut |v| match v {
                VarRef::Num(i) => bad |= i >= p.nums.len(),
                VarRef::Control(i) => bad |= i >= p.controls.len(),
            });
            if bad {
                out.push(Diagnostic::error(format!("action `{}` reads an undeclared variable", a.name), span));
            }
        }
        for (t, _) in &a.eff.bools {
            if *t >= p.bools.len() {
                out.push(Diagnostic::error(format!("action `{}` sets an undeclared variable", a.name), span));
            } else if !targets.insert(("b", *t)) {
                out.push(Diagnostic::error(
                    format!("action `{}` sets `{}` more than once", a.name, p.bools[*t]),
                    span,
                ));
            }
        }

        if crate::dsl::has_errors(&out) {
            continue;
        }
        if fold(&a.pre, p) == Some(false) {
            out.push(Diagnostic::warning(
                format!("precondition of `{}` can never hold over the control bounds", a.name),
                span,
            ));
        }
        if has_control_equality(&a.pre) {
            out.push(Diagnostic::warning(
                format!("precondition of `{}` constrains a control variable by equality; sampling cannot hit it", a.name),
                span,
            ));
        }
    }
    out
}

fn has_control_equality(c: &Constraint) -> bool {
    match c {
        Constraint::Compare { expr, cmp: Cmp::Eq } => expr.mentions_controls(),
        Constraint::Compare { .. } | Constraint::BoolEq(..) => false,
        Constraint::And(cs) | Constraint::Or(cs) => cs.iter().any(has_control_equality),
        Constraint::Not(c) => has_control_equality(c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    fn add(self, o: Self) -> Self {
        Interval { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    fn neg(self) -> Self {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    fn mul(self, o: Self) -> Self {
        let products = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Interval {
            lo: products.iter().copied().fold(f64::INFINITY, f64::min),
            hi: products.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn pow(self, e: u32) -> Self {
        if e == 0 {
            return Interval::point(1.0);
        }
        let e = e.min(i32::MAX as u32) as i32;
        let (a, b) = (self.lo.powi(e), self.hi.powi(e));
        if e % 2 == 0 && self.lo <= 0.0 && self.hi >= 0.0 {
            Interval { lo: 0.0, hi: a.max(b) }
        } else {
            Interval { lo: a.min(b), hi: a.max(b) }
        }
    }
}

/// Range of `e` over the control box, or `None` if it reads state variables.
fn range(e: &Expr, p: &Problem) -> Option<Interval> {
    Some(match e {
        Expr::Const(c) => Interval::point(*c),
        Expr::Var(VarRef::Num(_)) => return None,
        Expr::Var(VarRef::Control(i)) => {
            let c = p.controls.get(*i)?;
            Interval { lo: c.lower as f64, hi: c.upper as f64 }
        }
        Expr::Add(a, b) => range(a, p)?.add(range(b, p)?),
        Expr::Sub(a, b) => range(a, p)?.add(range(b, p)?.neg()),
        Expr::Mul(a, b) => range(a, p)?.mul(range(b, p)?),
        Expr::Neg(a) => range(a, p)?.neg(),
        Expr::Pow(a, k) => range(a, p)?.pow(*k),
    })
}

/// Three-valued constant folding: `Some(b)` when `c` has value `b` for every
/// state and every control valuation in the box.
fn fold(c: &Constraint, p: &Problem) -> Option<bool> {
    match c {
        Constraint::BoolEq(..) => None,
        Constraint::Compare { expr, cmp } => {
            let Interval { lo, hi } = range(expr, p)?;
            if lo.is_nan() || hi.is_nan() {
                return None;
            }
            let (always, never) = match cmp {
                Cmp::Lt => (hi < 0.0, lo >= 0.0),
                Cmp::Le => (hi <= 0.0, lo > 0.0),
                Cmp::Eq => (lo == 0.0 && hi == 0.0, lo > 0.0 || hi < 0.0),
                Cmp::Ge => (lo >= 0.0, hi < 0.0),
                Cmp::Gt => (lo > 0.0, hi <= 0.0),
            };
            if always {
                Some(true)
            } else if never {
                Some(false)
            } else {
                None
            }
        }
        Constraint::And(cs) => {
            let vals: Vec<_> = cs.iter().map(|c| fold(c, p)).collect();
            if vals.contains(&Some(false)) {
                Some(false)
            } else if vals.iter().all(|v| *v == Some(true)) {
                Some(true)
            } else {
                None
            }
        }
        Constraint::Or(cs) => {
            let vals: Vec<_> = cs.iter().map(|c| fold(c, p)).collect();
            if vals.contains(&Some(true)) {
                Some(true)
            } else if vals.iter().all(|v| *v == Some(false)) {
                Some(false)
            } else {
                None
            }
        }
        Constraint::Not(c) => fold(c, p).map(|b| !b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_document, Severity};
    use crate::model::{Action, ControlVarSpec, Effect, State};

    fn base() -> Problem {
        Problem {
            name: "p".into(),
            bools: vec![],
            nums: vec!["x".into()],
            controls: vec![ControlVarSpec::new("u", 0, 2)],
            actions: vec![],
            init: State::new(vec![], vec![0.0]),
            goal: Constraint::And(vec![Constraint::compare(Expr::num(0), Cmp::Ge)]),
        }
    }

    #[test]
    fn well_formed_is_clean() {
        assert!(validate(&base()).is_empty());
    }

    #[test]
    fn goal_with_control_is_error() {
        let mut p = base();
        p.goal = Constraint::And(vec![Constraint::compare(Expr::control(0), Cmp::Ge)]);
        let d = validate(&p);
        assert_eq!(d.iter().filter(|d| d.is_error()).count(), 1);
    }

    #[test]
    fn unsatisfiable_precondition_warns() {
        // u >= 5 with u in [0, 2]
        let mut p = base();
        p.actions.push(Action::new(
            "a",
            Constraint::compare_sides(Expr::control(0), Cmp::Ge, Expr::Const(5.0)),
            Effect::default(),
        ));
        let d = validate(&p);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
    }

    #[test]
    fn satisfiable_or_state_dependent_precondition_is_silent() {
        let mut p = base();
        p.actions.push(Action::new(
            "a",
            Constraint::compare_sides(Expr::control(0), Cmp::Ge, Expr::Const(1.5)),
            Effect::default(),
        ));
        p.actions.push(Action::new(
            "b",
            Constraint::compare_sides(Expr::add(Expr::num(0), Expr::control(0)), Cmp::Ge, Expr::Const(50.0)),
            Effect::default(),
        ));
        assert!(validate(&p).is_empty());
    }

    #[test]
    fn squared_control_interval() {
        // u^2 - 1 < -1 is impossible even though u - 1 spans negatives
        let mut p = base();
        p.controls[0] = ControlVarSpec::new("u", -1, 2);
        p.actions.push(Action::new(
            "a",
            Constraint::compare_sides(Expr::pow(Expr::control(0), 2), Cmp::Lt, Expr::Const(0.0)),
            Effect::default(),
        ));
        assert_eq!(validate(&p).len(), 1);
    }

    #[test]
    fn control_equality_warns() {
        let mut p = base();
        p.actions.push(Action::new(
            "a",
            Constraint::compare_sides(Expr::control(0), Cmp::Eq, Expr::Const(1.0)),
            Effect::default(),
        ));
        let d = validate(&p);
        assert!(d.iter().any(|d| d.message.contains("equality")));
    }

    #[test]
    fn non_conjunctive_goal_warns() {
        let mut p = base();
        p.goal = Constraint::Or(vec![]);
        let d = validate(&p);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
    }

    #[test]
    fn partial_initial_state() {
        let mut p = base();
        p.init.nums.clear();
        assert!(validate(&p).iter().any(|d| d.is_error()));
    }

    #[test]
    fn warnings_carry_source_spans() {
        let text = "(problem p (bools) (nums) (controls (u 0 2))\n  (action a (pre (>= u 5)) (eff))\n  (goal (and)))";
        let out = parse_document(text);
        assert!(out.problem.is_some());
        assert_eq!(out.diagnostics.len(), 1);
        let span = out.diagnostics[0].span;
        assert!(text[span.start..span.end].starts_with("(action a"));
        assert_eq!(span.line, 2);
    }
}
