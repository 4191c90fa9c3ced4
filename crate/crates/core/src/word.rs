//! Words and alphabets.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A candidate password: a non-empty sequence of unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(String);

impl Word {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::Domain("a word must contain at least one symbol".into()));
        }
        Ok(Word(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of symbols (not bytes).
    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Word {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A named, ordered set of distinct symbols. Symbol order defines the
/// enumeration order of exhaustive layers built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    name: String,
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let name = name.into();
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet { name, reason: "no symbols".into() });
        }
        let mut seen = HashSet::with_capacity(symbols.len());
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::InvalidAlphabet {
                    name,
                    reason: format!("duplicate symbol {c:?}"),
                });
            }
        }
        Ok(Alphabet { name, symbols })
    }

    pub fn digits() -> Self {
        Self::builtin("digits", '0'..='9')
    }

    pub fn ascii_lower() -> Self {
        Self::builtin("ascii-lower", 'a'..='z')
    }

    pub fn ascii_upper() -> Self {
        Self::builtin("ascii-upper", 'A'..='Z')
    }

    /// 0x20 through 0x7E.
    pub fn ascii_printable() -> Self {
        Self::builtin("ascii-printable", ' '..='~')
    }

    /// Looks up one of the built-in alphabets by name.
    pub fn builtin_named(name: &str) -> Option<Self> {
        match name {
            "digits" => Some(Self::digits()),
            "ascii-lower" => Some(Self::ascii_lower()),
            "ascii-upper" => Some(Self::ascii_upper()),
            "ascii-printable" => Some(Self::ascii_printable()),
            _ => None,
        }
    }

    fn builtin(name: &str, symbols: std::ops::RangeInclusive<char>) -> Self {
        Alphabet { name: name.to_string(), symbols: symbols.collect() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    /// Number of symbols shared with `other`.
    pub fn common_symbols(&self, other: &Alphabet) -> usize {
        self.symbols.iter().filter(|c| other.contains(**c)).count()
    }
}
