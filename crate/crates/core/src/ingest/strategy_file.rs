//! The line-oriented strategy file format.
//!
//! ```text
//! # comment
//! alphabet hex = 0123456789abcdef
//! source popular = popular.txt order=frequency
//! layer exhaustive alphabet=hex min_len=1 max_len=2
//! layer wordlist source=popular
//! layer mangle source=popular rules=firstcap,leet,suffix_digits2
//! layer combine source=popular k=2 sep=-
//! assume_disjoint false
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use super::{is_skippable, lines, parse_wordlist, tokens, ParseError, ParseErrorKind};
use crate::error::{Error, Result};
use crate::layers::{LayerSpec, MangleRule, WordOrdering, WordSource};
use crate::strategy::{Strategy, StrategyOptions};
use crate::word::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDecl {
    pub name: String,
    pub path: String,
    pub ordering: WordOrdering,
}

/// A layer as written in a strategy file, referring to alphabets and
/// sources by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerDecl {
    Exhaustive { alphabet: String, min_len: usize, max_len: usize },
    WordList { source: String },
    Mangle { source: String, rules: Vec<MangleRule> },
    Combine { source: String, k: usize, sep: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrategyFile {
    /// User-declared alphabets; built-ins are implicit.
    pub alphabets: Vec<Alphabet>,
    pub sources: Vec<SourceDecl>,
    pub layers: Vec<LayerDecl>,
    pub assume_disjoint: bool,
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, column, ParseErrorKind::Syntax(msg.into()))
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
}

struct KeyValues<'a> {
    line: usize,
    keyword_column: usize,
    values: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> KeyValues<'a> {
    fn parse(
        line: usize,
        keyword_column: usize,
        toks: &[(usize, &'a str)],
        allowed: &[&str],
    ) -> Result<Self, ParseError> {
        let mut values = HashMap::new();
        for &(col, tok) in toks {
            let Some((key, value)) = tok.split_once('=') else {
                return Err(syntax(line, col, format!("expected key=value, found {tok:?}")));
            };
            if !allowed.contains(&key) {
                return Err(syntax(line, col, format!("unexpected key {key:?}")));
            }
            if values.insert(key, (col, value)).is_some() {
                return Err(syntax(line, col, format!("key {key:?} given twice")));
            }
        }
        Ok(KeyValues { line, keyword_column, values })
    }

    fn required(&self, key: &str) -> Result<(usize, &'a str), ParseError> {
        self.values.get(key).copied().ok_or_else(|| {
            ParseError::new(
                self.line,
                self.keyword_column,
                ParseErrorKind::MissingRequiredKey(key.to_string()),
            )
        })
    }

    fn optional(&self, key: &str) -> Option<(usize, &'a str)> {
        self.values.get(key).copied()
    }

    fn number(&self, key: &str, min: usize) -> Result<usize, ParseError> {
        let (col, v) = self.required(key)?;
        let invalid = |reason: String| {
            ParseError::new(
                self.line,
                col,
                ParseErrorKind::InvalidValue { key: key.into(), value: v.into(), reason },
            )
        };
        let n: usize = if v.bytes().all(|b| b.is_ascii_digit()) {
            v.parse().map_err(|_| invalid("not a natural number".into()))?
        } else {
            return Err(invalid("not a natural number".into()));
        };
        if n < min {
            return Err(invalid(format!("must be at least {min}")));
        }
        Ok(n)
    }
}

/// Parses a strategy file. Alphabet and source names are checked against
/// the declarations anywhere in the file; sources are not read here.
pub fn parse_strategy(text: &str) -> Result<StrategyFile, ParseError> {
    let mut file = StrategyFile::default();
    let mut alphabet_names: HashSet<String> = HashSet::new();
    let mut source_names: HashSet<String> = HashSet::new();
    let mut alphabet_refs: Vec<(usize, usize, String)> = Vec::new();
    let mut source_refs: Vec<(usize, usize, String)> = Vec::new();
    let mut seen_disjoint = false;

    for (line_no, line) in lines(text) {
        if is_skippable(line) {
            continue;
        }
        let toks = tokens(line);
        let (kw_col, keyword) = toks[0];
        match keyword {
            "alphabet" => {
                let [_, (name_col, name), (eq_col, eq), (sym_col, symbols)] = toks[..] else {
                    return Err(syntax(line_no, kw_col, "expected `alphabet NAME = SYMBOLS`"));
                };
                if eq != "=" {
                    return Err(syntax(line_no, eq_col, "expected `=`"));
                }
                if !is_name(name) {
                    return Err(syntax(line_no, name_col, format!("invalid name {name:?}")));
                }
                if Alphabet::builtin_named(name).is_some()
                    || !alphabet_names.insert(name.to_string())
                {
                    return Err(ParseError::new(
                        line_no,
                        name_col,
                        ParseErrorKind::DuplicateDeclaration(name.to_string()),
                    ));
                }
                let alphabet = Alphabet::new(name, symbols.chars())
                    .map_err(|e| syntax(line_no, sym_col, e.to_string()))?;
                file.alphabets.push(alphabet);
            }
            "source" => {
                if toks.len() < 4 || toks.len() > 5 {
                    return Err(syntax(
                        line_no,
                        kw_col,
                        "expected `source NAME = PATH [order=file|frequency]`",
                    ));
                }
                let (name_col, name) = toks[1];
                let (eq_col, eq) = toks[2];
                let (_, path) = toks[3];
                if eq != "=" {
                    return Err(syntax(line_no, eq_col, "expected `=`"));
                }
                if !is_name(name) {
                    return Err(syntax(line_no, name_col, format!("invalid name {name:?}")));
                }
                if !source_names.insert(name.to_string()) {
                    return Err(ParseError::new(
                        line_no,
                        name_col,
                        ParseErrorKind::DuplicateDeclaration(name.to_string()),
                    ));
                }
                let kv = KeyValues::parse(line_no, kw_col, &toks[4..], &["order"])?;
                let ordering = match kv.optional("order") {
                    None | Some((_, "file")) => WordOrdering::File,
                    Some((_, "frequency")) => WordOrdering::Frequency,
                    Some((col, other)) => {
                        return Err(ParseError::new(
                            line_no,
                            col,
                            ParseErrorKind::InvalidValue {
                                key: "order".into(),
                                value: other.into(),
                                reason: "expected file or frequency".into(),
                            },
                        ))
                    }
                };
                file.sources.push(SourceDecl { name: name.into(), path: path.into(), ordering });
            }
            "layer" => {
                let Some(&(kind_col, kind)) = toks.get(1) else {
                    return Err(syntax(line_no, kw_col, "expected a layer kind"));
                };
                let rest = &toks[2..];
                let mut source_ref = |kv: &KeyValues| -> Result<String, ParseError> {
                    let (col, name) = kv.required("source")?;
                    source_refs.push((line_no, col, name.to_string()));
                    Ok(name.to_string())
                };
                let decl = match kind {
                    "exhaustive" => {
                        let kv = KeyValues::parse(
                            line_no,
                            kind_col,
                            rest,
                            &["alphabet", "min_len", "max_len"],
                        )?;
                        let (col, alphabet) = kv.required("alphabet")?;
                        let min_len = kv.number("min_len", 1)?;
                        let max_len = kv.number("max_len", 1)?;
                        if max_len < min_len {
                            let (col, v) = kv.required("max_len")?;
                            return Err(ParseError::new(
                                line_no,
                                col,
                                ParseErrorKind::InvalidValue {
                                    key: "max_len".into(),
                                    value: v.into(),
                                    reason: format!("must be at least min_len ({min_len})"),
                                },
                            ));
                        }
                        alphabet_refs.push((line_no, col, alphabet.to_string()));
                        LayerDecl::Exhaustive { alphabet: alphabet.into(), min_len, max_len }
                    }
                    "wordlist" => {
                        let kv = KeyValues::parse(line_no, kind_col, rest, &["source"])?;
                        LayerDecl::WordList { source: source_ref(&kv)? }
                    }
                    "mangle" => {
                        let kv = KeyValues::parse(line_no, kind_col, rest, &["source", "rules"])?;
                        let source = source_ref(&kv)?;
                        let (col, list) = kv.required("rules")?;
                        let mut rules = Vec::new();
                        let mut offset = col + "rules=".len();
                        for name in list.split(',') {
                            let rule = MangleRule::parse(name).ok_or_else(|| {
                                ParseError::new(
                                    line_no,
                                    offset,
                                    ParseErrorKind::UnknownRule(name.into()),
                                )
                            })?;
                            rules.push(rule);
                            offset += name.chars().count() + 1;
                        }
                        LayerDecl::Mangle { source, rules }
                    }
                    "combine" => {
                        let kv =
                            KeyValues::parse(line_no, kind_col, rest, &["source", "k", "sep"])?;
                        let source = source_ref(&kv)?;
                        let k = kv.number("k", 2)?;
                        let sep =
                            kv.optional("sep").map(|(_, s)| s.to_string()).unwrap_or_default();
                        LayerDecl::Combine { source, k, sep }
                    }
                    other => {
                        return Err(syntax(
                            line_no,
                            kind_col,
                            format!("unknown layer kind {other:?}"),
                        ))
                    }
                };
                file.layers.push(decl);
            }
            "assume_disjoint" => {
                let [_, (col, value)] = toks[..] else {
                    return Err(syntax(line_no, kw_col, "expected `assume_disjoint true|false`"));
                };
                if seen_disjoint {
                    return Err(ParseError::new(
                        line_no,
                        kw_col,
                        ParseErrorKind::DuplicateDeclaration("assume_disjoint".into()),
                    ));
                }
                seen_disjoint = true;
                file.assume_disjoint = match value {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(ParseError::new(
                            line_no,
                            col,
                            ParseErrorKind::InvalidValue {
                                key: "assume_disjoint".into(),
                                value: value.into(),
                                reason: "expected true or false".into(),
                            },
                        ))
                    }
                };
            }
            other => return Err(syntax(line_no, kw_col, format!("unknown directive {other:?}"))),
        }
    }

    for (line, col, name) in alphabet_refs {
        if !alphabet_names.contains(&name) && Alphabet::builtin_named(&name).is_none() {
            return Err(ParseError::new(
                line,
                col + "alphabet=".len(),
                ParseErrorKind::UnknownAlphabet(name),
            ));
        }
    }
    for (line, col, name) in source_refs {
        if !source_names.contains(&name) {
            return Err(ParseError::new(
                line,
                col + "source=".len(),
                ParseErrorKind::UnknownSource(name),
            ));
        }
    }
    Ok(file)
}

impl StrategyFile {
    pub fn alphabet(&self, name: &str) -> Option<Alphabet> {
        self.alphabets
            .iter()
            .find(|a| a.name() == name)
            .cloned()
            .or_else(|| Alphabet::builtin_named(name))
    }

    /// Builds the strategy, loading each referenced source once through
    /// `load`.
    pub fn build_with<F>(&self, mut load: F, cap: u64) -> Result<(Strategy, Vec<String>)>
    where
        F: FnMut(&SourceDecl) -> Result<Vec<String>>,
    {
        let mut loaded: HashMap<&str, WordSource> = HashMap::new();
        for decl in &self.sources {
            let used = self.layers.iter().any(|l| match l {
                LayerDecl::Exhaustive { .. } => false,
                LayerDecl::WordList { source }
                | LayerDecl::Mangle { source, .. }
                | LayerDecl::Combine { source, .. } => source == &decl.name,
            });
            if used {
                let words = load(decl)?;
                loaded
                    .insert(&decl.name, WordSource::new(decl.name.clone(), words, decl.ordering)?);
            }
        }
        let source = |name: &str| -> Result<WordSource> {
            loaded
                .get(name)
                .cloned()
                .ok_or_else(|| Error::InvalidLayer(format!("unknown source {name:?}")))
        };
        let mut layers = Vec::with_capacity(self.layers.len());
        for decl in &self.layers {
            layers.push(match decl {
                LayerDecl::Exhaustive { alphabet, min_len, max_len } => {
                    let a = self.alphabet(alphabet).ok_or_else(|| {
                        Error::InvalidLayer(format!("unknown alphabet {alphabet:?}"))
                    })?;
                    LayerSpec::exhaustive(a, *min_len, *max_len)?
                }
                LayerDecl::WordList { source: s } => LayerSpec::wordlist(source(s)?),
                LayerDecl::Mangle { source: s, rules } => {
                    LayerSpec::mangled(source(s)?, rules.clone())?
                }
                LayerDecl::Combine { source: s, k, sep } => {
                    LayerSpec::combined(source(s)?, *k, sep.clone())?
                }
            });
        }
        let options = StrategyOptions { assume_disjoint: self.assume_disjoint, cap };
        let strategy = Strategy::with_options(layers, options)?;
        let warnings = strategy.warnings().to_vec();
        Ok((strategy, warnings))
    }

    /// Builds the strategy, reading word lists relative to `base_dir`.
    /// Returns the strategy and any warnings from ingestion and layering.
    pub fn build(&self, base_dir: &Path, cap: u64) -> Result<(Strategy, Vec<String>)> {
        let mut warnings = Vec::new();
        let (strategy, mut layer_warnings) = self.build_with(
            |decl| {
                let path = base_dir.join(&decl.path);
                let bytes = std::fs::read(&path).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                let parsed = parse_wordlist(&bytes, decl.ordering)?;
                warnings.extend(parsed.warnings.into_iter().map(|w| format!("{}: {w}", decl.path)));
                Ok(parsed.words)
            },
            cap,
        )?;
        warnings.append(&mut layer_warnings);
        Ok((strategy, warnings))
    }
}

impl fmt::Display for LayerDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerDecl::Exhaustive { alphabet, min_len, max_len } => {
                write!(
                    f,
                    "layer exhaustive alphabet={alphabet} min_len={min_len} max_len={max_len}"
                )
            }
            LayerDecl::WordList { source } => write!(f, "layer wordlist source={source}"),
            LayerDecl::Mangle { source, rules } => {
                let names: Vec<String> = rules.iter().map(MangleRule::name).collect();
                write!(f, "layer mangle source={source} rules={}", names.join(","))
            }
            LayerDecl::Combine { source, k, sep } => {
                write!(f, "layer combine source={source} k={k} sep={sep}")
            }
        }
    }
}

/// Canonical serialization; parsing it yields an equal `StrategyFile`.
impl fmt::Display for StrategyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.alphabets {
            writeln!(f, "alphabet {} = {}", a.name(), a.symbols().iter().collect::<String>())?;
        }
        for s in &self.sources {
            writeln!(f, "source {} = {} order={}", s.name, s.path, s.ordering)?;
        }
        for l in &self.layers {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "assume_disjoint {}", self.assume_disjoint)
    }
}
