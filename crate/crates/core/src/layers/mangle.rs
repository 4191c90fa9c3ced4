//! Word mangling rules and their structural inversion.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use super::{fits, LayerSpec, WordSource};
use crate::error::{Error, Result};

/// A deterministic word transformation producing one or more variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MangleRule {
    Identity,
    /// First symbol upper-cased.
    FirstCap,
    /// Every symbol upper-cased.
    AllCaps,
    /// Every upper/lower-case assignment; the mask counts up with position 0
    /// as the least significant bit.
    AllCase,
    /// The fixed substitution a→@ e→3 i→1 l→1 o→0 s→$ at every position.
    Leet,
    /// The word followed by every 1- or 2-digit decimal string, in numeric order.
    SuffixDigits(u8),
}

impl MangleRule {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "identity" => MangleRule::Identity,
            "firstcap" => MangleRule::FirstCap,
            "allcaps" => MangleRule::AllCaps,
            "allcase" => MangleRule::AllCase,
            "leet" => MangleRule::Leet,
            "suffix_digits1" => MangleRule::SuffixDigits(1),
            "suffix_digits2" => MangleRule::SuffixDigits(2),
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        match self {
            MangleRule::Identity => "identity".into(),
            MangleRule::FirstCap => "firstcap".into(),
            MangleRule::AllCaps => "allcaps".into(),
            MangleRule::AllCase => "allcase".into(),
            MangleRule::Leet => "leet".into(),
            MangleRule::SuffixDigits(d) => format!("suffix_digits{d}"),
        }
    }

    fn is_case_rule(&self) -> bool {
        matches!(self, MangleRule::FirstCap | MangleRule::AllCaps | MangleRule::AllCase)
    }
}

impl fmt::Display for MangleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

// Single-symbol case mapping; symbols whose mapping expands to several
// symbols are left alone so every rule preserves word length.
fn upper(c: char) -> char {
    let mut it = c.to_uppercase();
    match (it.next(), it.next()) {
        (Some(u), None) => u,
        _ => c,
    }
}

fn lower(c: char) -> char {
    let mut it = c.to_lowercase();
    match (it.next(), it.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// The leet substitution for `c`, if any.
pub fn leet_char(c: char) -> Option<char> {
    match c {
        'a' => Some('@'),
        'e' => Some('3'),
        'i' | 'l' => Some('1'),
        'o' => Some('0'),
        's' => Some('$'),
        _ => None,
    }
}

// Symbols that leet can identify collapse to one representative.
fn leet_class(c: char) -> char {
    match c {
        '@' => 'a',
        '3' => 'e',
        '1' | 'l' => 'i',
        '0' => 'o',
        '$' => 's',
        _ => c,
    }
}

fn first_cap(w: &str) -> String {
    let mut chars = w.chars();
    match chars.next() {
        Some(c) => std::iter::once(upper(c)).chain(chars).collect(),
        None => String::new(),
    }
}

fn all_caps(w: &str) -> String {
    w.chars().map(upper).collect()
}

fn leet(w: &str) -> String {
    w.chars().map(|c| leet_char(c).unwrap_or(c)).collect()
}

fn is_allcase_variant(w: &str, base: &str) -> bool {
    let mut a = w.chars();
    let mut b = base.chars();
    loop {
        match (a.next(), b.next()) {
            (None, None) => return true,
            (Some(x), Some(y)) => {
                if x != lower(y) && x != upper(y) {
                    return false;
                }
            }
            _ => return false,
        }
    }
}

/// Variants of a rule other than the (possibly exponential) all-case family.
fn small_variants(w: &str, rule: MangleRule) -> Vec<String> {
    match rule {
        MangleRule::Identity => vec![w.to_string()],
        MangleRule::FirstCap => vec![first_cap(w)],
        MangleRule::AllCaps => vec![all_caps(w)],
        MangleRule::Leet => vec![leet(w)],
        MangleRule::SuffixDigits(d) => {
            let count = 10usize.pow(d as u32);
            (0..count).map(|n| format!("{w}{n:0width$}", width = d as usize)).collect()
        }
        MangleRule::AllCase => Vec::new(),
    }
}

fn caseable_positions(chars: &[char]) -> Vec<usize> {
    (0..chars.len()).filter(|&i| lower(chars[i]) != upper(chars[i])).collect()
}

/// The variant block of `w`: the word itself, then each rule's variants in
/// rule order, with repeats inside the block dropped.
pub fn mangle(w: &str, rules: &[MangleRule]) -> Vec<String> {
    let mut out = vec![w.to_string()];
    let mut seen: HashSet<String> = HashSet::from([w.to_string()]);
    let mut allcase_emitted = false;
    for &rule in rules {
        if rule == MangleRule::AllCase {
            if allcase_emitted {
                continue;
            }
            allcase_emitted = true;
            let chars: Vec<char> = w.chars().collect();
            let positions = caseable_positions(&chars);
            // masks with zero bits at non-caseable positions, in counting order
            let total: u64 = 1u64.checked_shl(positions.len() as u32).unwrap_or(0);
            assert!(
                positions.len() < 64,
                "all-case expansion of a {}-letter word is not enumerable",
                positions.len()
            );
            for mask in 0..total {
                let v: String = chars
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| match positions.iter().position(|&p| p == i) {
                        Some(bit) if mask >> bit & 1 == 1 => upper(c),
                        _ => lower(c),
                    })
                    .collect();
                if !seen.contains(&v) {
                    out.push(v);
                }
            }
        } else {
            for v in small_variants(w, rule) {
                if allcase_emitted && is_allcase_variant(&v, w) {
                    continue;
                }
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Size of the variant block of `w`, without expanding the all-case family.
pub(super) fn block_size(w: &str, rules: &[MangleRule]) -> BigUint {
    let has_allcase = rules.contains(&MangleRule::AllCase);
    let mut others: HashSet<String> = HashSet::from([w.to_string()]);
    for &rule in rules {
        others.extend(small_variants(w, rule));
    }
    if !has_allcase {
        return BigUint::from(others.len());
    }
    let chars: Vec<char> = w.chars().collect();
    let family = BigUint::one() << caseable_positions(&chars).len();
    let outside = others.iter().filter(|v| !is_allcase_variant(v, w)).count();
    family + BigUint::from(outside)
}

fn is_variant(w: &str, base: &str, rule: MangleRule) -> bool {
    match rule {
        MangleRule::Identity => w == base,
        MangleRule::FirstCap => w == first_cap(base),
        MangleRule::AllCaps => w == all_caps(base),
        MangleRule::AllCase => is_allcase_variant(w, base),
        MangleRule::Leet => w == leet(base),
        MangleRule::SuffixDigits(d) => {
            w.len() == base.len() + d as usize
                && w.starts_with(base)
                && w[base.len()..].bytes().all(|b| b.is_ascii_digit())
        }
    }
}

fn in_block(w: &str, base: &str, rules: &[MangleRule]) -> bool {
    w == base || rules.iter().any(|&r| is_variant(w, base, r))
}

fn upper_key(w: &str) -> String {
    w.chars().map(upper).collect()
}

fn leet_key(w: &str) -> String {
    w.chars().map(leet_class).collect()
}

/// Index from upper-cased form to base words. `None` when some base symbol
/// has a case mapping for which the upper-cased form is not invariant, so
/// the index would miss variants.
pub(super) fn build_upper_index(words: &[String]) -> Option<HashMap<String, Vec<usize>>> {
    let mut index: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        for c in w.chars() {
            let u = upper(c);
            if upper(lower(c)) != u || upper(u) != u {
                return None;
            }
        }
        index.entry(upper_key(w)).or_default().push(i);
    }
    Some(index)
}

pub(super) fn build_leet_index(words: &[String]) -> HashMap<String, Vec<usize>> {
    let mut index: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        index.entry(leet_key(w)).or_default().push(i);
    }
    index
}

/// Indices of every base word whose variant block contains `w`, found by
/// inverting the rules. `None` when inversion is not reliable for this
/// source.
pub(super) fn owners(base: &WordSource, rules: &[MangleRule], w: &str) -> Option<Vec<usize>> {
    let mut candidates: Vec<usize> = Vec::new();
    if let Some(i) = base.position(w) {
        candidates.push(i);
    }
    for &rule in rules {
        if let MangleRule::SuffixDigits(d) = rule {
            let d = d as usize;
            if w.len() > d && w.as_bytes()[w.len() - d..].iter().all(u8::is_ascii_digit) {
                if let Some(i) = base.position(&w[..w.len() - d]) {
                    candidates.push(i);
                }
            }
        }
    }
    if rules.iter().any(MangleRule::is_case_rule) {
        let index = base.upper_index()?;
        if let Some(ids) = index.get(&upper_key(w)) {
            candidates.extend(ids);
        }
    }
    if rules.contains(&MangleRule::Leet) {
        if let Some(ids) = base.leet_index().get(&leet_key(w)) {
            candidates.extend(ids);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&i| in_block(w, &base.words()[i], rules));
    Some(candidates)
}

/// Fails when two base words share a variant, which would make the layer
/// enumerate a word twice.
pub(crate) fn check_mangled_collisions(layer: &LayerSpec, cap: u64) -> Result<()> {
    let LayerSpec::Mangled { base, rules } = layer else {
        return Ok(());
    };
    let collision = |w: &str| {
        Error::InvalidLayer(format!(
            "mangle layer over {:?} produces {w:?} from more than one base word",
            base.name()
        ))
    };
    let structural = base.upper_index().is_some() || !rules.iter().any(MangleRule::is_case_rule);
    if !structural {
        let size = layer.cardinality();
        if !fits(&size, cap) {
            return Err(Error::CapExceeded { needed: size, cap });
        }
        let mut seen = HashSet::new();
        for v in layer.enumerate() {
            if !seen.insert(v.clone()) {
                return Err(collision(&v));
            }
        }
        return Ok(());
    }

    for (i, w) in base.words().iter().enumerate() {
        let mut variants = vec![w.clone()];
        for &rule in rules {
            variants.extend(small_variants(w, rule));
        }
        for v in &variants {
            let found = owners(base, rules, v).unwrap_or_default();
            if found.iter().any(|&j| j != i) {
                return Err(collision(v));
            }
        }
    }
    // all-case families of two words meet only if their upper-cased forms agree
    if rules.contains(&MangleRule::AllCase) {
        if let Some(index) = base.upper_index() {
            for ids in index.values().filter(|ids| ids.len() > 1) {
                for (a, &x) in ids.iter().enumerate() {
                    for &y in &ids[a + 1..] {
                        let wx: Vec<char> = base.words()[x].chars().collect();
                        let wy: Vec<char> = base.words()[y].chars().collect();
                        let meet = wx.len() == wy.len()
                            && wx.iter().zip(&wy).all(|(&p, &q)| {
                                let a = [lower(p), upper(p)];
                                a.contains(&lower(q)) || a.contains(&upper(q))
                            });
                        if meet {
                            return Err(collision(&base.words()[x]));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::DEFAULT_CAP;
    use MangleRule::*;

    #[test]
    fn mangle_examples() {
        assert_eq!(mangle("player", &[FirstCap]), ["player", "Player"]);
        assert_eq!(mangle("player", &[Leet]), ["player", "p1@y3r"]);
        assert_eq!(mangle("Ox", &[AllCaps]), ["Ox", "OX"]);
        assert_eq!(mangle("ox", &[AllCase]), ["ox", "Ox", "oX", "OX"]);
        assert_eq!(mangle("Ox", &[AllCase]), ["Ox", "ox", "oX", "OX"]);
        assert_eq!(mangle("a", &[SuffixDigits(1)]).len(), 11);
        assert_eq!(mangle("a", &[SuffixDigits(2)])[1..3], ["a00", "a01"]);
        // no applicable change: only the identity survives
        assert_eq!(mangle("42", &[FirstCap, AllCaps, AllCase, Leet]), ["42"]);
    }

    #[test]
    fn block_size_matches_mangle() {
        let rules_sets: Vec<Vec<MangleRule>> = vec![
            vec![AllCase],
            vec![FirstCap, AllCase, Leet],
            vec![Leet, AllCaps, SuffixDigits(2), AllCase],
            vec![Identity, Identity, SuffixDigits(1)],
        ];
        for rules in &rules_sets {
            for w in ["ox", "Player", "a1b2", "élan", "ß", "sos", "x9"] {
                assert_eq!(
                    block_size(w, rules),
                    BigUint::from(mangle(w, rules).len()),
                    "{w} {rules:?}"
                );
            }
        }
    }

    #[test]
    fn seven_letter_allcase_block() {
        assert_eq!(block_size("scrabbl", &[AllCase]), BigUint::from(128u32));
    }

    #[test]
    fn inversion_finds_owners() {
        let base = WordSource::from_words("b", &["player", "sol", "red"]).unwrap();
        let rules = [FirstCap, AllCase, Leet, SuffixDigits(2)];
        for (i, w) in base.words().iter().enumerate() {
            for v in mangle(w, &rules) {
                assert_eq!(owners(&base, &rules, &v), Some(vec![i]), "{v}");
            }
        }
        assert_eq!(owners(&base, &rules, "p1ayer"), Some(vec![]));
        assert_eq!(owners(&base, &rules, "RED7"), Some(vec![]));
        assert_eq!(owners(&base, &rules, "red77"), Some(vec![2]));
    }

    #[test]
    fn collisions_detected() {
        let dup =
            LayerSpec::mangled(WordSource::from_words("b", &["ox", "Ox"]).unwrap(), vec![FirstCap])
                .unwrap();
        assert!(check_mangled_collisions(&dup, DEFAULT_CAP).is_err());
        let dup_case =
            LayerSpec::mangled(WordSource::from_words("b", &["ox", "OX"]).unwrap(), vec![AllCase])
                .unwrap();
        assert!(check_mangled_collisions(&dup_case, DEFAULT_CAP).is_err());
        let suffix = LayerSpec::mangled(
            WordSource::from_words("b", &["a", "a1"]).unwrap(),
            vec![SuffixDigits(1)],
        )
        .unwrap();
        assert!(check_mangled_collisions(&suffix, DEFAULT_CAP).is_err());
        let ok = LayerSpec::mangled(
            WordSource::from_words("b", &["player", "dragon"]).unwrap(),
            vec![FirstCap, AllCase, Leet, SuffixDigits(2)],
        )
        .unwrap();
        assert!(check_mangled_collisions(&ok, DEFAULT_CAP).is_ok());
    }
}
