//! Text formats: word lists, strategy files and distribution files.

mod distribution;
mod strategy_file;
mod wordlist;

use std::fmt;

use thiserror::Error;

pub use distribution::{parse_distribution, parse_rational};
pub use strategy_file::{parse_strategy, LayerDecl, SourceDecl, StrategyFile};
pub use wordlist::{parse_wordlist, ParsedWordList};

/// A parse failure, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownAlphabet(String),
    UnknownSource(String),
    UnknownRule(String),
    MissingRequiredKey(String),
    InvalidValue { key: String, value: String, reason: String },
    DuplicateDeclaration(String),
    MalformedLine(String),
    InvalidUtf8,
    NegativeOrNonNumericCount(String),
    ZeroTotalWeight,
    NonPositiveWeight(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownAlphabet(name) => write!(f, "unknown alphabet {name:?}"),
            ParseErrorKind::UnknownSource(name) => write!(f, "unknown source {name:?}"),
            ParseErrorKind::UnknownRule(name) => write!(f, "unknown mangle rule {name:?}"),
            ParseErrorKind::MissingRequiredKey(key) => write!(f, "missing required key {key:?}"),
            ParseErrorKind::InvalidValue { key, value, reason } => {
                write!(f, "invalid value {value:?} for {key}: {reason}")
            }
            ParseErrorKind::DuplicateDeclaration(name) => write!(f, "{name:?} is declared twice"),
            ParseErrorKind::MalformedLine(msg) => write!(f, "malformed line: {msg}"),
            ParseErrorKind::InvalidUtf8 => f.write_str("invalid UTF-8"),
            ParseErrorKind::NegativeOrNonNumericCount(v) => {
                write!(f, "count {v:?} is not a non-negative decimal integer")
            }
            ParseErrorKind::ZeroTotalWeight => f.write_str("distribution weights sum to zero"),
            ParseErrorKind::NonPositiveWeight(v) => write!(f, "weight {v} is not positive"),
        }
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based
/// starting columns (counted in symbols).
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut col = 0usize;
    for (byte, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some((b, cl)) = start.take() {
                out.push((cl, &line[b..byte]));
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, cl)) = start {
        out.push((cl, &line[b..]));
    }
    out
}

/// Text lines with LF endings, a trailing CR tolerated.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

pub(crate) fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}
