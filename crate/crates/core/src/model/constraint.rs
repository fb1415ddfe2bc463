use super::expr::{eval_expr, Expr, VarRef};
use super::{ControlValuation, ModelError, State};

/// Comparator of a canonical comparison `expr ⋈ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, value: f64) -> bool {
        match self {
            Cmp::Lt => value < 0.0,
            Cmp::Le => value <= 0.0,
            Cmp::Eq => value == 0.0,
            Cmp::Ge => value >= 0.0,
            Cmp::Gt => value > 0.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "<" => Cmp::Lt,
            "<=" => Cmp::Le,
            "=" => Cmp::Eq,
            ">=" => Cmp::Ge,
            ">" => Cmp::Gt,
            _ => return None,
        })
    }
}

/// Logical formula over Boolean equalities and numeric comparisons.
///
/// Comparisons are kept in the canonical form `expr ⋈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    BoolEq(usize, bool),
    Compare { expr: Expr, cmp: Cmp },
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
    Not(Box<Constraint>),
}

impl Constraint {
    /// The empty conjunction, which always holds.
    pub fn truth() -> Self {
        Constraint::And(Vec::new())
    }

    pub fn compare(expr: Expr, cmp: Cmp) -> Self {
        Constraint::Compare { expr, cmp }
    }

    /// `lhs ⋈ rhs`, normalized to `(lhs - rhs) ⋈ 0`.
    pub fn compare_sides(lhs: Expr, cmp: Cmp, rhs: Expr) -> Self {
        Constraint::Compare { expr: Expr::sub(lhs, rhs), cmp }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Constraint) -> Self {
        Constraint::Not(Box::new(c))
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(VarRef)) {
        match self {
            Constraint::BoolEq(..) => {}
            Constraint::Compare { expr, .. } => expr.visit_vars(f),
            Constraint::And(cs) | Constraint::Or(cs) => cs.iter().for_each(|c| c.visit_vars(f)),
            Constraint::Not(c) => c.visit_vars(f),
        }
    }

    pub fn visit_bools(&self, f: &mut impl FnMut(usize)) {
        match self {
            Constraint::BoolEq(i, _) => f(*i),
            Constraint::Compare { .. } => {}
            Constraint::And(cs) | Constraint::Or(cs) => cs.iter().for_each(|c| c.visit_bools(f)),
            Constraint::Not(c) => c.visit_bools(f),
        }
    }

    pub fn mentions_controls(&self) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= matches!(v, VarRef::Control(_)));
        found
    }
}

/// Evaluates `c` under `(s, mu)` with exact comparator semantics.
pub fn eval_constraint(c: &Constraint, s: &State, mu: &ControlValuation) -> Result<bool, ModelError> {
    Ok(match c {
        Constraint::BoolEq(i, b) => {
            *s.bools.get(*i).ok_or(ModelError::UnboundBool(*i))? == *b
        }
        Constraint::Compare { expr, cmp } => cmp.holds(eval_expr(expr, s, mu)?),
        Constraint::And(cs) => {
            for c in cs {
                if !eval_constraint(c, s, mu)? {
                    return Ok(false);
                }
            }
            true
        }
        Constraint::Or(cs) => {
            for c in cs {
                if eval_constraint(c, s, mu)? {
                    return Ok(true);
                }
            }
            false
        }
        Constraint::Not(c) => !eval_constraint(c, s, mu)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ge_boundary_holds() {
        let c = Constraint::compare_sides(Expr::num(0), Cmp::Ge, Expr::Const(1.0));
        let s = State::new(vec![], vec![1.0]);
        assert!(eval_constraint(&c, &s, &ControlValuation::default()).unwrap());
    }

    #[test]
    fn strict_lt_fails_at_boundary() {
        let c = Constraint::And(vec![
            Constraint::BoolEq(0, true),
            Constraint::compare_sides(Expr::control(0), Cmp::Lt, Expr::Const(2.0)),
        ]);
        let s = State::new(vec![true], vec![]);
        assert!(!eval_constraint(&c, &s, &ControlValuation(vec![2.0])).unwrap());
    }

    #[test]
    fn negated_equality() {
        let c = Constraint::not(Constraint::compare(Expr::num(0), Cmp::Eq));
        let s = State::new(vec![], vec![0.0]);
        assert!(!eval_constraint(&c, &s, &ControlValuation::default()).unwrap());
    }

    #[test]
    fn empty_connectives() {
        let s = State::default();
        let mu = ControlValuation::default();
        assert!(eval_constraint(&Constraint::And(vec![]), &s, &mu).unwrap());
        assert!(!eval_constraint(&Constraint::Or(vec![]), &s, &mu).unwrap());
    }

    #[test]
    fn unbound_bool() {
        let c = Constraint::BoolEq(3, true);
        let err = eval_constraint(&c, &State::default(), &ControlValuation::default()).unwrap_err();
        assert_eq!(err, ModelError::UnboundBool(3));
    }
}
