use std::collections::{HashMap, HashSet};

use super::sexpr::{self, SExpr};
use super::validate::validate_with_spans;
use super::{has_errors, Diagnostic, SourceSpan};
use crate::model::{Action, Cmp, Constraint, ControlVarSpec, Effect, Expr, Problem, State, VarRef};

/// Deepest formula tree accepted. Kept below the reader's nesting limit so
/// that serialized binary forms, plus their enclosing sections, parse again.
const MAX_TREE_DEPTH: usize = sexpr::MAX_DEPTH - 16;

/// Source locations of the top-level parts of a parsed problem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemSpans {
    pub document: SourceSpan,
    pub bools: Vec<SourceSpan>,
    pub nums: Vec<SourceSpan>,
    pub controls: Vec<SourceSpan>,
    pub actions: Vec<SourceSpan>,
    pub goal: SourceSpan,
}

#[derive(Debug, Clone)]
pub struct ParseOutput {
    pub problem: Option<Problem>,
    pub spans: Option<ProblemSpans>,
    /// Errors and warnings. `problem` is `None` iff at least one is an error.
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses and validates a problem document; warnings are dropped on success.
pub fn parse_problem(text: &str) -> Result<Problem, Vec<Diagnostic>> {
    let out = parse_document(text);
    match out.problem {
        Some(p) => Ok(p),
        None => Err(out.diagnostics.into_iter().filter(Diagnostic::is_error).collect()),
    }
}

/// Like [`parse_problem`] but accepts arbitrary bytes; invalid UTF-8 is a
/// lexical error located at the first offending byte.
pub fn parse_problem_bytes(bytes: &[u8]) -> Result<Problem, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_problem(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            // the prefix is valid UTF-8 by construction
            let prefix = std::str::from_utf8(valid).unwrap_or_default();
            let index = sexpr::LineIndex::new(prefix);
            let at = e.valid_up_to();
            let mut span = index.span(prefix, at, at);
            span.end = (at + 1).min(bytes.len());
            Err(vec![Diagnostic::error("invalid UTF-8 in input", span)])
        }
    }
}

pub fn parse_document(text: &str) -> ParseOutput {
    let tree = match sexpr::read(text) {
        Ok(t) => t,
        Err(d) => return ParseOutput { problem: None, spans: None, diagnostics: vec![d] },
    };
    let mut builder = Builder::default();
    let built = builder.problem(&tree);
    let mut diagnostics = builder.diags;
    match built {
        Some((problem, spans)) if !has_errors(&diagnostics) => {
            diagnostics.extend(validate_with_spans(&problem, Some(&spans)));
            let ok = !has_errors(&diagnostics);
            ParseOutput { problem: ok.then_some(problem), spans: Some(spans), diagnostics }
        }
        _ => {
            if !has_errors(&diagnostics) {
                diagnostics.push(Diagnostic::error("malformed problem", tree.span()));
            }
            ParseOutput { problem: None, spans: None, diagnostics }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Symbol {
    Bool(usize),
    Num(usize),
    Control(usize),
}

#[derive(Clone, Copy, PartialEq)]
enum Scope {
    Action,
    Goal,
}

#[derive(Default)]
struct Builder {
    diags: Vec<Diagnostic>,
    symbols: HashMap<String, Symbol>,
}

fn is_number_literal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if b.first() == Some(&b'-') {
        i += 1;
    }
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if !digits(&mut i) {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        digits(&mut i);
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return false;
        }
    }
    i == b.len()
}

fn is_int_literal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')) && s != "true" && s != "false"
}

impl Builder {
    fn err(&mut self, msg: impl Into<String>, span: SourceSpan) {
        self.diags.push(Diagnostic::error(msg, span));
    }

    fn list<'a>(&mut self, e: &'a SExpr, what: &str) -> Option<&'a [SExpr]> {
        match e.as_list() {
            Some(items) => Some(items),
            None => {
                self.err(format!("expected a list for {what}"), e.span());
                None
            }
        }
    }

    fn keyword_list<'a>(&mut self, e: &'a SExpr, kw: &str) -> Option<&'a [SExpr]> {
        let items = self.list(e, &format!("`({kw} ...)`"))?;
        match e.head() {
            Some(h) if h == kw => Some(&items[1..]),
            Some(h) => {
                self.err(format!("unknown keyword `{h}`, expected `{kw}`"), items[0].span());
                None
            }
            None => {
                self.err(format!("expected `({kw} ...)`"), e.span());
                None
            }
        }
    }

    fn name(&mut self, e: &SExpr, what: &str) -> Option<String> {
        match e.as_atom() {
            Some(s) if is_name(s) => Some(s.to_string()),
            Some(s) => {
                self.err(format!("invalid {what} name `{s}`"), e.span());
                None
            }
            None => {
                self.err(format!("expected a {what} name"), e.span());
                None
            }
        }
    }

    fn number(&mut self, e: &SExpr) -> Option<f64> {
        let Some(s) = e.as_atom() else {
            self.err("expected a number", e.span());
            return None;
        };
        if !is_number_literal(s) {
            self.err(format!("invalid numeric literal `{s}`"), e.span());
            return None;
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.err(format!("numeric literal `{s}` is out of range"), e.span());
                None
            }
        }
    }

    fn int(&mut self, e: &SExpr, what: &str) -> Option<i64> {
        let Some(s) = e.as_atom() else {
            self.err(format!("expected an integer {what}"), e.span());
            return None;
        };
        if !is_int_literal(s) {
            self.err(format!("{what} must be an integer, found `{s}`"), e.span());
            return None;
        }
        match s.parse::<i64>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.err(format!("{what} `{s}` is out of range"), e.span());
                None
            }
        }
    }

    fn boolean(&mut self, e: &SExpr) -> Option<bool> {
        match e.as_atom() {
            Some("true") => Some(true),
            Some("false") => Some(false),
            _ => {
                self.err("expected `true` or `false`", e.span());
                None
            }
        }
    }

    fn declare(&mut self, name: &str, sym: Symbol, span: SourceSpan) {
        if self.symbols.contains_key(name) {
            self.err(format!("duplicate declaration of `{name}`"), span);
        } else {
            self.symbols.insert(name.to_string(), sym);
        }
    }

    fn problem(&mut self, e: &SExpr) -> Option<(Problem, ProblemSpans)> {
        let rest = self.keyword_list(e, "problem")?;
        let mut spans = ProblemSpans { document: e.span(), ..Default::default() };
        if rest.len() < 5 {
            self.err(
                "a problem needs a name and `bools`, `nums`, `controls` and `goal` sections",
                e.span(),
            );
            return None;
        }
        let name = self.name(&rest[0], "problem");

        let mut bools = Vec::new();
        let mut init_bools = Vec::new();
        for d in self.keyword_list(&rest[1], "bools").unwrap_or_default() {
            let (n, v) = match d {
                SExpr::Atom { .. } => (self.name(d, "boolean variable"), Some(false)),
                SExpr::List { items, .. } if items.len() == 2 => {
                    (self.name(&items[0], "boolean variable"), self.boolean(&items[1]))
                }
                _ => {
                    self.err("expected `NAME` or `(NAME true|false)`", d.span());
                    (None, None)
                }
            };
            if let (Some(n), Some(v)) = (n, v) {
                self.declare(&n, Symbol::Bool(bools.len()), d.span());
                bools.push(n);
                init_bools.push(v);
                spans.bools.push(d.span());
            }
        }

        let mut nums = Vec::new();
        let mut init_nums = Vec::new();
        for d in self.keyword_list(&rest[2], "nums").unwrap_or_default() {
            match d.as_list() {
                Some(items) if items.len() == 2 => {
                    let n = self.name(&items[0], "numeric variable");
                    let v = self.number(&items[1]);
                    if let (Some(n), Some(v)) = (n, v) {
                        self.declare(&n, Symbol::Num(nums.len()), d.span());
                        nums.push(n);
                        init_nums.push(v);
                        spans.nums.push(d.span());
                    }
                }
                _ => self.err("expected `(NAME NUMBER)`", d.span()),
            }
        }

        let mut controls = Vec::new();
        for d in self.keyword_list(&rest[3], "controls").unwrap_or_default() {
            match d.as_list() {
                Some(items) if items.len() == 3 => {
                    let n = self.name(&items[0], "control variable");
                    let lo = self.int(&items[1], "control bound");
                    let hi = self.int(&items[2], "control bound");
                    if let (Some(n), Some(lo), Some(hi)) = (n, lo, hi) {
                        if lo >= hi {
                            self.err(format!("control `{n}`: lower bound must be < upper bound"), d.span());
                            continue;
                        }
                        self.declare(&n, Symbol::Control(controls.len()), d.span());
                        controls.push(ControlVarSpec::new(n, lo, hi));
                        spans.controls.push(d.span());
                    }
                }
                _ => self.err("expected `(NAME LOWER UPPER)`", d.span()),
            }
        }

        let mut actions = Vec::new();
        let mut action_names = HashSet::new();
        let mut goal = None;
        let sections = &rest[4..];
        for (i, section) in sections.iter().enumerate() {
            match section.head() {
                Some("action") => {
                    if let Some(a) = self.action(section) {
                        if !action_names.insert(a.name.clone()) {
                            self.err(format!("duplicate action `{}`", a.name), section.span());
                        }
                        actions.push(a);
                        spans.actions.push(section.span());
                    }
                }
                Some("goal") if i + 1 == sections.len() => {
                    let items = section.as_list().unwrap_or_default();
                    if items.len() != 2 {
                        self.err("expected `(goal CONSTRAINT)`", section.span());
                    } else {
                        goal = self.constraint(&items[1], Scope::Goal, 0);
                        spans.goal = section.span();
                    }
                }
                Some("goal") => self.err("the goal must be the last section", section.span()),
                Some(other) => self.err(format!("unknown keyword `{other}`"), section.span()),
                None => self.err("expected `(action ...)` or `(goal ...)`", section.span()),
            }
        }
        if goal.is_none() && !has_errors(&self.diags) {
            self.err("missing `(goal ...)` section", e.span());
        }

        let problem = Problem {
            name: name?,
            bools,
            nums,
            controls,
            actions,
            init: State::new(init_bools, init_nums),
            goal: goal?,
        };
        Some((problem, spans))
    }

    fn action(&mut self, e: &SExpr) -> Option<Action> {
        let rest = self.keyword_list(e, "action")?;
        if rest.len() != 3 {
            self.err("expected `(action NAME (pre ...) (eff ...))`", e.span());
            return None;
        }
        let name = self.name(&rest[0], "action");
        let pre = match self.keyword_list(&rest[1], "pre") {
            Some([c]) => self.constraint(c, Scope::Action, 0),
            Some(_) => {
                self.err("expected `(pre CONSTRAINT)`", rest[1].span());
                None
            }
            None => None,
        };
        let eff = self.effect(&rest[2]);
        Some(Action { name: name?, pre: pre?, eff: eff? })
    }

    fn effect(&mut self, e: &SExpr) -> Option<Effect> {
        let items = self.keyword_list(e, "eff")?;
        let mut eff = Effect::default();
        let mut assigned: HashSet<String> = HashSet::new();
        let mut ok = true;
        for item in items {
            let Some(parts) = item.as_list() else {
                self.err("expected `(assign NAME EXPR)` or `(set NAME BOOL)`", item.span());
                ok = false;
                continue;
            };
            let target = parts.get(1).and_then(SExpr::as_atom).map(str::to_string);
            match (item.head(), parts.len(), target) {
                (Some("assign"), 3, Some(t)) => {
                    let rhs = self.expr(&parts[2], Scope::Action, 0);
                    match self.symbols.get(&t).copied() {
                        Some(Symbol::Num(i)) => {
                            if let Some(rhs) = rhs {
                                eff.nums.push((i, rhs));
                            }
                        }
                        Some(Symbol::Control(_)) => {
                            self.err(format!("control variable `{t}` cannot be assigned"), parts[1].span());
                            ok = false;
                        }
                        Some(Symbol::Bool(_)) => {
                            self.err(format!("boolean variable `{t}` must be changed with `set`"), parts[1].span());
                            ok = false;
                        }
                        None => {
                            self.err(format!("undeclared variable `{t}`"), parts[1].span());
                            ok = false;
                        }
                    }
                    if !assigned.insert(t.clone()) {
                        self.err(format!("variable `{t}` is assigned more than once"), item.span());
                        ok = false;
                    }
                }
                (Some("set"), 3, Some(t)) => {
                    let b = self.boolean(&parts[2]);
                    match (self.symbols.get(&t).copied(), b) {
                        (Some(Symbol::Bool(i)), Some(b)) => eff.bools.push((i, b)),
                        (Some(Symbol::Bool(_)), None) => ok = false,
                        (Some(_), _) => {
                            self.err(format!("`set` needs a boolean variable, `{t}` is numeric"), parts[1].span());
                            ok = false;
                        }
                        (None, _) => {
                            self.err(format!("undeclared variable `{t}`"), parts[1].span());
                            ok = false;
                        }
                    }
                    if !assigned.insert(t.clone()) {
                        self.err(format!("variable `{t}` is assigned more than once"), item.span());
                        ok = false;
                    }
                }
                (Some(kw), _, _) if kw != "assign" && kw != "set" => {
                    self.err(format!("unknown keyword `{kw}`"), item.span());
                    ok = false;
                }
                _ => {
                    self.err("expected `(assign NAME EXPR)` or `(set NAME BOOL)`", item.span());
                    ok = false;
                }
            }
        }
        ok.then_some(eff)
    }

    fn constraint(&mut self, e: &SExpr, scope: Scope, depth: usize) -> Option<Constraint> {
        if depth > MAX_TREE_DEPTH {
            self.err(format!("formula nested deeper than {MAX_TREE_DEPTH} levels"), e.span());
            return None;
        }
        let Some(items) = e.as_list() else {
            self.err("expected a constraint `( ... )`", e.span());
            return None;
        };
        let Some(head) = e.head() else {
            self.err("expected a constraint keyword", e.span());
            return None;
        };
        let args = &items[1..];
        match head {
            "and" | "or" => {
                let mut parts = Vec::with_capacity(args.len());
                let mut ok = true;
                for a in args {
                    match self.constraint(a, scope, depth + 1) {
                        Some(c) => parts.push(c),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                Some(if head == "and" { Constraint::And(parts) } else { Constraint::Or(parts) })
            }
            "not" => {
                if args.len() != 1 {
                    self.err("`not` takes exactly one constraint", e.span());
                    return None;
                }
                Some(Constraint::not(self.constraint(&args[0], scope, depth + 1)?))
            }
            "=" if args.len() == 2 && matches!(args[1].as_atom(), Some("true" | "false")) => {
                let name = self.name(&args[0], "boolean variable")?;
                let b = self.boolean(&args[1])?;
                match self.symbols.get(&name) {
                    Some(Symbol::Bool(i)) => Some(Constraint::BoolEq(*i, b)),
                    Some(_) => {
                        self.err(format!("`{name}` is not a boolean variable"), args[0].span());
                        None
                    }
                    None => {
                        self.err(format!("undeclared variable `{name}`"), args[0].span());
                        None
                    }
                }
            }
            _ => match Cmp::from_symbol(head) {
                Some(cmp) => {
                    if args.len() != 2 {
                        self.err(format!("`{head}` takes exactly two expressions"), e.span());
                        return None;
                    }
                    let lhs = self.expr(&args[0], scope, depth + 1);
                    let rhs_zero = args[1].as_atom().is_some_and(|s| is_number_literal(s) && s.parse::<f64>() == Ok(0.0));
                    let rhs = self.expr(&args[1], scope, depth + 1);
                    let (lhs, rhs) = (lhs?, rhs?);
                    Some(if rhs_zero { Constraint::compare(lhs, cmp) } else { Constraint::compare_sides(lhs, cmp, rhs) })
                }
                None => {
                    self.err(format!("unknown constraint keyword `{head}`"), items[0].span());
                    None
                }
            },
        }
    }

    fn expr(&mut self, e: &SExpr, scope: Scope, depth: usize) -> Option<Expr> {
        if depth > MAX_TREE_DEPTH {
            self.err(format!("expression nested deeper than {MAX_TREE_DEPTH} levels"), e.span());
            return None;
        }
        match e {
            SExpr::Atom { text, span } => {
                if is_number_literal(text) {
                    return self.number(e).map(Expr::Const);
                }
                match self.symbols.get(text.as_str()).copied() {
                    Some(Symbol::Num(i)) => Some(Expr::Var(VarRef::Num(i))),
                    Some(Symbol::Control(i)) => {
                        if scope == Scope::Goal {
                            self.err(format!("control variable `{text}` in goal"), *span);
                            None
                        } else {
                            Some(Expr::Var(VarRef::Control(i)))
                        }
                    }
                    Some(Symbol::Bool(_)) => {
                        self.err(format!("boolean variable `{text}` in numeric expression"), *span);
                        None
                    }
                    None if is_name(text) => {
                        self.err(format!("undeclared variable `{text}`"), *span);
                        None
                    }
                    None => {
                        self.err(format!("invalid expression `{text}`"), *span);
                        None
                    }
                }
            }
            SExpr::List { items, span } => {
                let Some(head) = e.head() else {
                    self.err("expected an operator", *span);
                    return None;
                };
                let args = &items[1..];
                match head {
                    "^" => {
                        if args.len() != 2 {
                            self.err("`^` takes an expression and an integer exponent", *span);
                            return None;
                        }
                        let base = self.expr(&args[0], scope, depth + 1);
                        let exp = match args[1].as_atom() {
                            Some(s) if s.bytes().all(|c| c.is_ascii_digit()) && !s.is_empty() => match s.parse::<u32>() {
                                Ok(v) => Some(v),
                                Err(_) => {
                                    self.err(format!("exponent `{s}` is out of range"), args[1].span());
                                    None
                                }
                            },
                            _ => {
                                self.err("exponent must be a nonnegative integer", args[1].span());
                                None
                            }
                        };
                        Some(Expr::pow(base?, exp?))
                    }
                    "-" if args.len() == 1 => Some(Expr::neg(self.expr(&args[0], scope, depth + 1)?)),
                    "+" | "-" | "*" => {
                        if args.len() < 2 {
                            self.err(format!("`{head}` takes at least two operands"), *span);
                            return None;
                        }
                        let mut operands = Vec::with_capacity(args.len());
                        let mut ok = true;
                        // operands end up under a left-deep chain of binary nodes
                        let below = depth + args.len() - 1;
                        if below > MAX_TREE_DEPTH {
                            self.err(format!("expression nested deeper than {MAX_TREE_DEPTH} levels"), *span);
                            return None;
                        }
                        for a in args {
                            match self.expr(a, scope, below) {
                                Some(x) => operands.push(x),
                                None => ok = false,
                            }
                        }
                        if !ok {
                            return None;
                        }
                        let mut it = operands.into_iter();
                        let first = it.next()?;
                        Some(it.fold(first, |acc, x| match head {
                            "+" => Expr::add(acc, x),
                            "-" => Expr::sub(acc, x),
                            _ => Expr::mul(acc, x),
                        }))
                    }
                    other => {
                        self.err(format!("unknown operator `{other}`"), items[0].span());
                        None
                    }
                }
            }
        }
    }
}
