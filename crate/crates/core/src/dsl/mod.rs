//! Surface syntax: case files (`.cfc`), judgments, judgment databases and the
//! items recorded in proof files.
//!
//! `!` is complement and binds tighter than `+`; `#` starts a comment.
//! Judgments print canonically so `parse_judgment(&render_judgment(j)) == j`.

mod lexer;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

pub use parser::{
    parse_case, parse_graph_source, parse_item, parse_judgment, parse_judgment_db,
    parse_value_term,
};
pub use render::{render_case, render_intervention_expr, render_item, render_judgment};

/// A region of the source text. `line` and `column` are 1-based; `offset`
/// and `length` are in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
    pub offset: usize,
}

impl SourceSpan {
    /// From the start of `self` to the end of `end`.
    pub fn to(self, end: SourceSpan) -> SourceSpan {
        let stop = (end.offset + end.length).max(self.offset + self.length);
        SourceSpan { length: stop - self.offset, ..self }
    }

    pub fn in_bounds(&self, text: &str) -> bool {
        self.offset + self.length <= text.len() && self.line >= 1 && self.column >= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: expected {expected}, found {found}", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError { span, expected: expected.into(), found: found.into() }
    }

    /// The offending line with a caret marker underneath.
    pub fn snippet(&self, text: &str) -> String {
        let line = text.lines().nth(self.span.line.saturating_sub(1)).unwrap_or("");
        let pad = " ".repeat(self.span.column.saturating_sub(1));
        let marks = "^".repeat(self.span.length.max(1));
        format!("{line}\n{pad}{marks}")
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}
