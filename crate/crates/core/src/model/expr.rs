use super::{ControlValuation, ModelError, State};

/// Reference to a numeric quantity: a state variable from `X` or a control
/// variable from `U`. Indices point into the owning problem's declarations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRef {
    Num(usize),
    Control(usize),
}

/// Polynomial expression over state and control variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(VarRef),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn num(i: usize) -> Self {
        Expr::Var(VarRef::Num(i))
    }

    pub fn control(i: usize) -> Self {
        Expr::Var(VarRef::Control(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Self {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, exp: u32) -> Self {
        Expr::Pow(Box::new(a), exp)
    }

    /// Calls `f` on every variable reference in the tree.
    pub fn visit_vars(&self, f: &mut impl FnMut(VarRef)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.visit_vars(f),
        }
    }

    pub fn mentions_controls(&self) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= matches!(v, VarRef::Control(_)));
        found
    }

    pub fn mentions_state(&self) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= matches!(v, VarRef::Num(_)));
        found
    }
}

/// Evaluates `expr` under the state `s` and control valuation `mu`.
pub fn eval_expr(expr: &Expr, s: &State, mu: &ControlValuation) -> Result<f64, ModelError> {
    Ok(match expr {
        Expr::Const(c) => *c,
        Expr::Var(VarRef::Num(i)) => *s
            .nums
            .get(*i)
            .ok_or(ModelError::UnboundVariable(VarRef::Num(*i)))?,
        Expr::Var(VarRef::Control(i)) => *mu
            .0
            .get(*i)
            .ok_or(ModelError::UnboundVariable(VarRef::Control(*i)))?,
        Expr::Add(a, b) => eval_expr(a, s, mu)? + eval_expr(b, s, mu)?,
        Expr::Sub(a, b) => eval_expr(a, s, mu)? - eval_expr(b, s, mu)?,
        Expr::Mul(a, b) => eval_expr(a, s, mu)? * eval_expr(b, s, mu)?,
        Expr::Neg(a) => -eval_expr(a, s, mu)?,
        Expr::Pow(a, e) => {
            let base = eval_expr(a, s, mu)?;
            match i32::try_from(*e) {
                Ok(e) => base.powi(e),
                Err(_) => base.powf(f64::from(*e)),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(nums: &[f64]) -> State {
        State::new(vec![], nums.to_vec())
    }

    #[test]
    fn constant() {
        let v = eval_expr(&Expr::Const(2.0), &state(&[7.0]), &ControlValuation(vec![3.0])).unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn state_plus_control() {
        let e = Expr::add(Expr::num(0), Expr::control(0));
        let v = eval_expr(&e, &state(&[1.0]), &ControlValuation(vec![0.5])).unwrap();
        assert_eq!(v, 1.5);
    }

    #[test]
    fn polynomial() {
        // 2*x*u + u^2 at x=3, u=2
        let e = Expr::add(
            Expr::mul(Expr::mul(Expr::Const(2.0), Expr::num(0)), Expr::control(0)),
            Expr::pow(Expr::control(0), 2),
        );
        let v = eval_expr(&e, &state(&[3.0]), &ControlValuation(vec![2.0])).unwrap();
        assert_eq!(v, 16.0);
    }

    #[test]
    fn unbound_is_structural_error() {
        let e = Expr::control(1);
        let err = eval_expr(&e, &state(&[]), &ControlValuation(vec![0.0])).unwrap_err();
        assert_eq!(err, ModelError::UnboundVariable(VarRef::Control(1)));
    }

    #[test]
    fn negation_and_zero_power() {
        let e = Expr::add(Expr::neg(Expr::num(0)), Expr::pow(Expr::num(0), 0));
        let v = eval_expr(&e, &state(&[4.0]), &ControlValuation::default()).unwrap();
        assert_eq!(v, -3.0);
    }
}
