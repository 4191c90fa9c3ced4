//! Strategy layers. Each one knows its exact cardinality and can answer
//! membership queries without enumerating.

mod combine;
mod mangle;
mod overlap;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

pub use mangle::{leet_char, mangle, MangleRule};
pub use overlap::{effective_layers, intersection_size, EffectiveLayer, Overlap};

pub(crate) use combine::check_combined_injective;
pub(crate) use mangle::check_mangled_collisions;

/// Default bound on the number of words any operation materializes.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// How the records of a word list file are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WordOrdering {
    #[default]
    File,
    Frequency,
}

impl WordOrdering {
    pub fn as_str(self) -> &'static str {
        match self {
            WordOrdering::File => "file",
            WordOrdering::Frequency => "frequency",
        }
    }
}

impl fmt::Display for WordOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named, ordered, duplicate-free list of words. Cheap to clone.
#[derive(Clone)]
pub struct WordSource {
    inner: Arc<SourceInner>,
}

struct SourceInner {
    name: String,
    ordering: WordOrdering,
    words: Vec<String>,
    index: HashMap<String, usize>,
    // lazily built inversion indices used by mangled-layer membership
    upper_index: OnceLock<Option<HashMap<String, Vec<usize>>>>,
    leet_index: OnceLock<HashMap<String, Vec<usize>>>,
}

impl WordSource {
    pub fn new(
        name: impl Into<String>,
        words: Vec<String>,
        ordering: WordOrdering,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidLayer("word sources cannot contain empty words".into()));
            }
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::DuplicateInInput(w.clone()));
            }
        }
        Ok(WordSource {
            inner: Arc::new(SourceInner {
                name: name.into(),
                ordering,
                words,
                index,
                upper_index: OnceLock::new(),
                leet_index: OnceLock::new(),
            }),
        })
    }

    /// Convenience constructor for in-memory lists in file order.
    pub fn from_words<S: AsRef<str>>(name: &str, words: &[S]) -> Result<Self> {
        Self::new(name, words.iter().map(|w| w.as_ref().to_string()).collect(), WordOrdering::File)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn ordering(&self) -> WordOrdering {
        self.inner.ordering
    }

    pub fn words(&self) -> &[String] {
        &self.inner.words
    }

    pub fn len(&self) -> usize {
        self.inner.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.words.is_empty()
    }

    pub fn contains(&self, w: &str) -> bool {
        self.inner.index.contains_key(w)
    }

    pub fn position(&self, w: &str) -> Option<usize> {
        self.inner.index.get(w).copied()
    }

    pub(crate) fn upper_index(&self) -> Option<&HashMap<String, Vec<usize>>> {
        self.inner.upper_index.get_or_init(|| mangle::build_upper_index(&self.inner.words)).as_ref()
    }

    pub(crate) fn leet_index(&self) -> &HashMap<String, Vec<usize>> {
        self.inner.leet_index.get_or_init(|| mangle::build_leet_index(&self.inner.words))
    }
}

impl PartialEq for WordSource {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.name == other.inner.name
                && self.inner.ordering == other.inner.ordering
                && self.inner.words == other.inner.words)
    }
}

impl Eq for WordSource {}

impl fmt::Debug for WordSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordSource")
            .field("name", &self.inner.name)
            .field("ordering", &self.inner.ordering)
            .field("len", &self.inner.words.len())
            .finish()
    }
}

/// One stratum of an attacker strategy, before deduplication against
/// earlier strata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerSpec {
    /// Every word over `alphabet` with length in `min_len..=max_len`.
    Exhaustive { alphabet: Alphabet, min_len: usize, max_len: usize },
    /// The words of a list, in list order.
    WordList { source: WordSource },
    /// Every base word followed by its mangled variants.
    Mangled { base: WordSource, rules: Vec<MangleRule> },
    /// Ordered `k`-tuples of base words (with repetition) joined by `separator`.
    Combined { base: WordSource, k: usize, separator: String },
}

impl LayerSpec {
    pub fn exhaustive(alphabet: Alphabet, min_len: usize, max_len: usize) -> Result<Self> {
        let layer = LayerSpec::Exhaustive { alphabet, min_len, max_len };
        layer.validate()?;
        Ok(layer)
    }

    pub fn wordlist(source: WordSource) -> Self {
        LayerSpec::WordList { source }
    }

    pub fn mangled(base: WordSource, rules: Vec<MangleRule>) -> Result<Self> {
        let layer = LayerSpec::Mangled { base, rules };
        layer.validate()?;
        Ok(layer)
    }

    pub fn combined(base: WordSource, k: usize, separator: impl Into<String>) -> Result<Self> {
        let layer = LayerSpec::Combined { base, k, separator: separator.into() };
        layer.validate()?;
        Ok(layer)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LayerSpec::Exhaustive { min_len, max_len, .. } => {
                if *min_len == 0 {
                    return Err(Error::InvalidLayer(
                        "exhaustive min_len must be at least 1".into(),
                    ));
                }
                if min_len > max_len {
                    return Err(Error::InvalidLayer(format!(
                        "exhaustive min_len {min_len} exceeds max_len {max_len}"
                    )));
                }
            }
            LayerSpec::WordList { .. } => {}
            LayerSpec::Mangled { rules, .. } => {
                for r in rules {
                    if let MangleRule::SuffixDigits(d) = r {
                        if !(1..=2).contains(d) {
                            return Err(Error::InvalidLayer(format!(
                                "suffix_digits takes 1 or 2 digits, got {d}"
                            )));
                        }
                    }
                }
            }
            LayerSpec::Combined { k, .. } => {
                if *k < 2 {
                    return Err(Error::InvalidLayer(format!(
                        "combine k must be at least 2, got {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LayerSpec::Exhaustive { .. } => "exhaustive",
            LayerSpec::WordList { .. } => "wordlist",
            LayerSpec::Mangled { .. } => "mangle",
            LayerSpec::Combined { .. } => "combine",
        }
    }

    /// Exact size of the declared word set.
    pub fn cardinality(&self) -> BigUint {
        match self {
            LayerSpec::Exhaustive { alphabet, min_len, max_len } => {
                let base = BigUint::from(alphabet.size());
                (*min_len..=*max_len).map(|n| base.pow(n as u32)).sum()
            }
            LayerSpec::WordList { source } => BigUint::from(source.len()),
            LayerSpec::Mangled { base, rules } => {
                base.words().iter().map(|w| mangle::block_size(w, rules)).sum()
            }
            LayerSpec::Combined { base, k, .. } => BigUint::from(base.len()).pow(*k as u32),
        }
    }

    /// Whether the layer can be handled as an explicit word set: word lists
    /// always, anything else when it fits under `cap`.
    pub fn is_explicit(&self, cap: u64) -> bool {
        matches!(self, LayerSpec::WordList { .. }) || fits(&self.cardinality(), cap)
    }

    /// Membership in the declared word set.
    pub fn contains(&self, w: &str, cap: u64) -> Result<bool> {
        match self {
            LayerSpec::Exhaustive { alphabet, min_len, max_len } => {
                let mut n = 0usize;
                for c in w.chars() {
                    if !alphabet.contains(c) {
                        return Ok(false);
                    }
                    n += 1;
                }
                Ok(n >= *min_len && n <= *max_len)
            }
            LayerSpec::WordList { source } => Ok(source.contains(w)),
            LayerSpec::Mangled { base, rules } => match mangle::owners(base, rules, w) {
                Some(owners) => Ok(!owners.is_empty()),
                None => {
                    let size = self.cardinality();
                    if !fits(&size, cap) {
                        return Err(Error::CapExceeded { needed: size, cap });
                    }
                    Ok(self.enumerate().any(|v| v == w))
                }
            },
            LayerSpec::Combined { base, k, separator } => {
                Ok(combine::parses_as_tuple(base, *k, separator, w))
            }
        }
    }

    /// Lazy canonical enumeration of the declared word set.
    pub fn enumerate(&self) -> Box<dyn Iterator<Item = String> + Send + '_> {
        match self {
            LayerSpec::Exhaustive { alphabet, min_len, max_len } => {
                let symbols = alphabet.symbols();
                Box::new((*min_len..=*max_len).flat_map(move |len| {
                    Odometer::new(symbols.len(), len)
                        .map(move |idx| idx.iter().map(|&i| symbols[i]).collect::<String>())
                }))
            }
            LayerSpec::WordList { source } => Box::new(source.words().iter().cloned()),
            LayerSpec::Mangled { base, rules } => {
                Box::new(base.words().iter().flat_map(move |w| mangle(w, rules)))
            }
            LayerSpec::Combined { base, k, separator } => {
                let words = base.words();
                Box::new(Odometer::new(words.len(), *k).map(move |idx| {
                    let mut out = String::new();
                    for (j, &i) in idx.iter().enumerate() {
                        if j > 0 {
                            out.push_str(separator);
                        }
                        out.push_str(&words[i]);
                    }
                    out
                }))
            }
        }
    }

    /// The word source a list-backed layer draws from.
    pub fn source(&self) -> Option<&WordSource> {
        match self {
            LayerSpec::Exhaustive { .. } => None,
            LayerSpec::WordList { source } => Some(source),
            LayerSpec::Mangled { base, .. } | LayerSpec::Combined { base, .. } => Some(base),
        }
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerSpec::Exhaustive { alphabet, min_len, max_len } => write!(
                f,
                "exhaustive alphabet={} min_len={min_len} max_len={max_len}",
                alphabet.name()
            ),
            LayerSpec::WordList { source } => write!(f, "wordlist source={}", source.name()),
            LayerSpec::Mangled { base, rules } => {
                let names: Vec<String> = rules.iter().map(|r| r.name()).collect();
                write!(f, "mangle source={} rules={}", base.name(), names.join(","))
            }
            LayerSpec::Combined { base, k, separator } => {
                write!(f, "combine source={} k={k} sep={separator}", base.name())
            }
        }
    }
}

pub fn cardinality(layer: &LayerSpec) -> BigUint {
    layer.cardinality()
}

pub fn contains(layer: &LayerSpec, w: &Word, cap: u64) -> Result<bool> {
    layer.contains(w.as_str(), cap)
}

pub fn enumerate(layer: &LayerSpec) -> impl Iterator<Item = Word> + '_ {
    layer.enumerate().map(|s| Word::new(s).expect("layers never produce empty words"))
}

pub(crate) fn fits(n: &BigUint, cap: u64) -> bool {
    n.to_u64().is_some_and(|v| v <= cap)
}

/// Counts through all `len`-digit numbers in base `base`, most significant
/// digit first.
pub(crate) struct Odometer {
    base: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(base: usize, len: usize) -> Self {
        Odometer { base, digits: vec![0; len], done: base == 0 && len > 0 }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.base {
                break;
            }
            self.digits[i] = 0;
        }
        Some(current)
    }
}
