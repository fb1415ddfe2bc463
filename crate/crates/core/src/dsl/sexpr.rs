//! Reader for the s-expression layer of the problem format.
//!
//! The reader is iterative so that deeply nested input cannot exhaust the
//! stack; nesting beyond [`MAX_DEPTH`] is rejected with a diagnostic.

use super::{Diagnostic, SourceSpan};

pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom { text: String, span: SourceSpan },
    List { items: Vec<SExpr>, span: SourceSpan },
}

impl SExpr {
    pub fn span(&self) -> SourceSpan {
        match self {
            SExpr::Atom { span, .. } | SExpr::List { span, .. } => *span,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Atom { .. } => None,
        }
    }

    /// Head keyword of a list, if it starts with an atom.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(SExpr::as_atom)
    }
}

/// Maps byte offsets to 1-based line and column numbers.
pub struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    pub fn span(&self, text: &str, start: usize, end: usize) -> SourceSpan {
        let line = self.starts.partition_point(|&s| s <= start);
        let line_start = self.starts[line - 1];
        let column = text.get(line_start..start).map_or(start - line_start, |s| s.chars().count()) + 1;
        SourceSpan { start, end, line, column }
    }
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || c == '(' || c == ')' || c == ';'
}

fn is_atom_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '+' | '*' | '^' | '<' | '>' | '=' | '/')
}

/// Reads exactly one top-level s-expression; trailing content other than
/// whitespace and comments is an error.
pub fn read(text: &str) -> Result<SExpr, Diagnostic> {
    let index = LineIndex::new(text);
    let mut stack: Vec<(usize, Vec<SExpr>)> = Vec::new();
    let mut top: Option<SExpr> = None;
    let mut chars = text.char_indices().peekable();

    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == ';' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if top.is_some() {
            return Err(Diagnostic::error(
                "unexpected content after the top-level expression",
                index.span(text, i, i + c.len_utf8()),
            ));
        }
        match c {
            '(' => {
                chars.next();
                if stack.len() >= MAX_DEPTH {
                    return Err(Diagnostic::error(
                        format!("nesting deeper than {MAX_DEPTH} levels"),
                        index.span(text, i, i + 1),
                    ));
                }
                stack.push((i, Vec::new()));
            }
            ')' => {
                chars.next();
                let Some((start, items)) = stack.pop() else {
                    return Err(Diagnostic::error("unbalanced `)`", index.span(text, i, i + 1)));
                };
                let node = SExpr::List { items, span: index.span(text, start, i + 1) };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => top = Some(node),
                }
            }
            _ => {
                let start = i;
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    if !is_atom_char(c) {
                        return Err(Diagnostic::error(
                            format!("unexpected character {c:?}"),
                            index.span(text, j, j + c.len_utf8()),
                        ));
                    }
                    end = j + c.len_utf8();
                    chars.next();
                }
                let node = SExpr::Atom { text: text[start..end].to_string(), span: index.span(text, start, end) };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => top = Some(node),
                }
            }
        }
    }

    if let Some((start, _)) = stack.last() {
        return Err(Diagnostic::error("unbalanced `(`: missing `)`", index.span(text, *start, *start + 1)));
    }
    top.ok_or_else(|| Diagnostic::error("empty document", index.span(text, text.len(), text.len())))
}
