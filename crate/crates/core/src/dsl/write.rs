use std::fmt::Write;

use crate::model::{Constraint, Decision, Expr, Problem, VarRef};

/// Shortest decimal text that parses back to exactly `v`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        // keeps the sign of -0.0 out of canonical output
        return "0".to_string();
    }
    format!("{v}")
}

fn write_expr(out: &mut String, e: &Expr, p: &Problem) {
    match e {
        Expr::Const(c) => out.push_str(&format_number(*c)),
        Expr::Var(VarRef::Num(i)) => out.push_str(p.nums.get(*i).map_or("?", String::as_str)),
        Expr::Var(VarRef::Control(i)) => out.push_str(p.controls.get(*i).map_or("?", |c| c.name.as_str())),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            let op = match e {
                Expr::Add(..) => "+",
                Expr::Sub(..) => "-",
                _ => "*",
            };
            out.push('(');
            out.push_str(op);
            out.push(' ');
            write_expr(out, a, p);
            out.push(' ');
            write_expr(out, b, p);
            out.push(')');
        }
        Expr::Neg(a) => {
            out.push_str("(- ");
            write_expr(out, a, p);
            out.push(')');
        }
        Expr::Pow(a, k) => {
            out.push_str("(^ ");
            write_expr(out, a, p);
            let _ = write!(out, " {k})");
        }
    }
}

fn write_constraint(out: &mut String, c: &Constraint, p: &Problem) {
    match c {
        Constraint::BoolEq(i, b) => {
            let _ = write!(out, "(= {} {b})", p.bools.get(*i).map_or("?", String::as_str));
        }
        Constraint::Compare { expr, cmp } => {
            let _ = write!(out, "({} ", cmp.symbol());
            match expr {
                // `(op a 0)` would read back as `a`, so a literal zero stays inside
                Expr::Sub(a, b) if !matches!(**b, Expr::Const(z) if z == 0.0) => {
                    write_expr(out, a, p);
                    out.push(' ');
                    write_expr(out, b, p);
                }
                _ => {
                    write_expr(out, expr, p);
                    out.push_str(" 0");
                }
            }
            out.push(')');
        }
        Constraint::And(cs) | Constraint::Or(cs) => {
            out.push_str(if matches!(c, Constraint::And(_)) { "(and" } else { "(or" });
            for c in cs {
                out.push(' ');
                write_constraint(out, c, p);
            }
            out.push(')');
        }
        Constraint::Not(inner) => {
            out.push_str("(not ");
            write_constraint(out, inner, p);
            out.push(')');
        }
    }
}

/// Canonical text of a problem; `parse_problem` reads it back to an equal
/// value.
pub fn serialize_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(problem {}", p.name);

    out.push_str("  (bools");
    for (name, v) in p.bools.iter().zip(&p.init.bools) {
        if *v {
            let _ = write!(out, " ({name} true)");
        } else {
            let _ = write!(out, " {name}");
        }
    }
    out.push_str(")\n  (nums");
    for (name, v) in p.nums.iter().zip(&p.init.nums) {
        let _ = write!(out, " ({name} {})", format_number(*v));
    }
    out.push_str(")\n  (controls");
    for c in &p.controls {
        let _ = write!(out, " ({} {} {})", c.name, c.lower, c.upper);
    }
    out.push_str(")\n");

    for a in &p.actions {
        let _ = write!(out, "  (action {} (pre ", a.name);
        write_constraint(&mut out, &a.pre, p);
        out.push_str(") (eff");
        for (t, rhs) in &a.eff.nums {
            let _ = write!(out, " (assign {} ", p.nums[*t]);
            write_expr(&mut out, rhs, p);
            out.push(')');
        }
        for (t, b) in &a.eff.bools {
            let _ = write!(out, " (set {} {b})", p.bools[*t]);
        }
        out.push_str("))\n");
    }

    out.push_str("  (goal ");
    write_constraint(&mut out, &p.goal, p);
    out.push_str("))\n");
    out
}

/// One line per step, `index: action name=value ...`, after a header line.
pub fn serialize_plan(plan: &[Decision], p: &Problem) -> String {
    let mut out = format!("; plan steps={}\n", plan.len());
    for (i, d) in plan.iter().enumerate() {
        let name = p.actions.get(d.action).map_or("?", |a| a.name.as_str());
        let _ = write!(out, "{i}: {name}");
        for (spec, v) in p.controls.iter().zip(d.controls.values()) {
            let _ = write!(out, " {}={}", spec.name, format_number(*v));
        }
        out.push('\n');
    }
    out
}
