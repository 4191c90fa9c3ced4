use std::collections::HashMap;

use super::{ParseError, ParseErrorKind};
use crate::layers::WordOrdering;

/// Words in attack order, plus warnings for dropped duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedWordList {
    pub words: Vec<String>,
    pub warnings: Vec<String>,
}

/// One record per line: a word, optionally followed by a single TAB and a
/// decimal count. Blank lines and lines starting with `#` are skipped.
/// Frequency ordering sorts by count, highest first, ties in file order;
/// records without a count rank as zero.
pub fn parse_wordlist(bytes: &[u8], ordering: WordOrdering) -> Result<ParsedWordList, ParseError> {
    let mut records: Vec<(String, u64)> = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    let mut warnings = Vec::new();

    for (i, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = i + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw)
            .map_err(|_| ParseError::new(line_no, 1, ParseErrorKind::InvalidUtf8))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let word = parts.next().unwrap_or_default();
        let count = parts.next();
        if parts.next().is_some() {
            return Err(ParseError::new(
                line_no,
                1,
                ParseErrorKind::MalformedLine("more than one TAB".into()),
            ));
        }
        if word.is_empty() {
            return Err(ParseError::new(
                line_no,
                1,
                ParseErrorKind::MalformedLine("empty word".into()),
            ));
        }
        let count = match count {
            None => 0,
            Some(c) => {
                let column = word.chars().count() + 2;
                if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(ParseError::new(
                        line_no,
                        column,
                        ParseErrorKind::NegativeOrNonNumericCount(c.to_string()),
                    ));
                }
                c.parse::<u64>().map_err(|_| {
                    ParseError::new(
                        line_no,
                        column,
                        ParseErrorKind::NegativeOrNonNumericCount(c.to_string()),
                    )
                })?
            }
        };
        if let Some(&first) = first_seen.get(word) {
            warnings.push(format!(
                "line {line_no}: duplicate word {word:?} (first seen on line {first}) ignored"
            ));
            continue;
        }
        first_seen.insert(word.to_string(), line_no);
        records.push((word.to_string(), count));
    }

    if ordering == WordOrdering::Frequency {
        // stable: ties keep first appearance
        records.sort_by_key(|r| std::cmp::Reverse(r.1));
    }
    Ok(ParsedWordList { words: records.into_iter().map(|(w, _)| w).collect(), warnings })
}
