//! Membership and injectivity for word combinations.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::Bound;

use super::{fits, LayerSpec, WordSource};
use crate::error::{Error, Result};

/// Whether `w` splits into exactly `k` base words joined by `sep`.
pub(super) fn parses_as_tuple(base: &WordSource, k: usize, sep: &str, w: &str) -> bool {
    let mut memo: HashMap<(usize, usize), bool> = HashMap::new();
    parse_from(base, sep, w, 0, k, &mut memo)
}

fn parse_from(
    base: &WordSource,
    sep: &str,
    w: &str,
    pos: usize,
    remaining: usize,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if let Some(&hit) = memo.get(&(pos, remaining)) {
        return hit;
    }
    let rest = &w[pos..];
    let mut found = false;
    for (offset, c) in rest.char_indices() {
        let end = pos + offset + c.len_utf8();
        if !base.contains(&w[pos..end]) {
            continue;
        }
        if remaining == 1 {
            if end == w.len() {
                found = true;
                break;
            }
        } else if w[end..].starts_with(sep)
            && parse_from(base, sep, w, end + sep.len(), remaining - 1, memo)
        {
            found = true;
            break;
        }
    }
    memo.insert((pos, remaining), found);
    found
}

/// Fails when two different tuples of a combination layer spell the same
/// word, in which case the tuple count would overstate the word set.
pub(crate) fn check_combined_injective(layer: &LayerSpec, cap: u64) -> Result<()> {
    let LayerSpec::Combined { base, separator, .. } = layer else {
        return Ok(());
    };
    let words = base.words();
    let sep_free = !separator.is_empty() && words.iter().all(|w| !w.contains(separator.as_str()));
    let same_length =
        words.first().map(|f| words.iter().all(|w| w.len() == f.len())).unwrap_or(true);
    if sep_free || same_length {
        return Ok(());
    }
    let ambiguous = || {
        Error::InvalidLayer(format!(
            "combine layer over {:?} with separator {separator:?} spells some words in more than one way",
            base.name()
        ))
    };
    let size = layer.cardinality();
    if fits(&size, cap) {
        let mut seen = HashSet::new();
        for w in layer.enumerate() {
            if !seen.insert(w) {
                return Err(ambiguous());
            }
        }
        return Ok(());
    }
    let code: Vec<String> = words.iter().map(|w| format!("{w}{separator}")).collect();
    if uniquely_decodable(&code) {
        Ok(())
    } else {
        Err(ambiguous())
    }
}

/// Sardinas-Patterson test: no concatenation of codewords has two
/// factorizations.
pub(super) fn uniquely_decodable(code: &[String]) -> bool {
    let sorted: BTreeSet<&str> = code.iter().map(String::as_str).collect();
    if sorted.len() != code.len() {
        return false;
    }
    let dangling = |x: &str, out: &mut Vec<String>| {
        // codewords that are proper prefixes of x
        for (i, _) in x.char_indices().skip(1) {
            if sorted.contains(&x[..i]) {
                out.push(x[i..].to_string());
            }
        }
        // codewords having x as a proper prefix
        for c in sorted.range::<str, _>((Bound::Included(x), Bound::Unbounded)) {
            if !c.starts_with(x) {
                break;
            }
            if c.len() > x.len() {
                out.push(c[x.len()..].to_string());
            }
        }
    };
    let mut seen: HashSet<String> = HashSet::new();
    let mut frontier: Vec<String> = Vec::new();
    for c in &sorted {
        let mut found = Vec::new();
        for (i, _) in c.char_indices().skip(1) {
            if sorted.contains(&c[..i]) {
                found.push(c[i..].to_string());
            }
        }
        for s in found {
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    while let Some(x) = frontier.pop() {
        if sorted.contains(x.as_str()) {
            return false;
        }
        let mut next = Vec::new();
        dangling(&x, &mut next);
        for s in next {
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    true
}
