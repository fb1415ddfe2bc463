//! Text format for problems with control variables.
//!
//! ```text
//! (problem counters-2
//!   (bools)
//!   (nums (c0 0.0) (c1 0.0))
//!   (controls (u 0 1))
//!   (action inc-c0 (pre (<= (+ c0 u) 10)) (eff (assign c0 (+ c0 u))))
//!   ...
//!   (goal (and (>= (- c1 (+ c0 1)) 0))))
//! ```
//!
//! Comparisons `(op lhs rhs)` are stored as `(lhs - rhs) op 0`; a literal
//! zero right-hand side is dropped. Besides the binary and n-ary forms,
//! `(- e)` denotes negation.

mod parse;
pub mod sexpr;
mod validate;
mod write;

use std::fmt;

pub use parse::{parse_document, parse_problem, parse_problem_bytes, ParseOutput, ProblemSpans};
pub use validate::{validate, validate_with_spans};
pub use write::{format_number, serialize_plan, serialize_problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic { severity: Severity::Error, message: message.into(), span }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic { severity: Severity::Warning, message: message.into(), span }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {kind}: {}", self.span.line.max(1), self.span.column.max(1), self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
