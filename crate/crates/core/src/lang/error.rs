use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based position range on a single line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SourceSpan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SourceSpan {
    pub fn new(line: usize, col_start: usize, col_end: usize) -> Self {
        Self {
            file: None,
            line,
            col_start,
            col_end,
        }
    }

    pub fn start() -> Self {
        Self::new(1, 1, 1)
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }

    /// True when the span addresses a position inside `text` (one column
    /// past the end of a line counts as inside).
    pub fn is_within(&self, text: &str) -> bool {
        if self.line == 0 || self.col_start == 0 || self.col_end < self.col_start {
            return false;
        }
        let lines: Vec<&str> = text.split('\n').collect();
        match lines.get(self.line - 1) {
            Some(l) => self.col_end <= l.chars().count() + 1,
            None => false,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}", self.line, self.col_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax,
    DuplicateId,
    UnknownSignal,
    UnknownUnit,
    EnvSignal,
    Schema,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            kind,
            span,
            message: message.into(),
        }
    }

    pub fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Syntax, span, message)
    }

    pub fn in_file(mut self, file: &str) -> Self {
        self.span.file = Some(file.to_string());
        self
    }
}
