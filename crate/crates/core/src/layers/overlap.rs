//! Intersections between layers and earlier-wins deduplication.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{check_combined_injective, check_mangled_collisions, LayerSpec};
use crate::error::{Error, Result};

/// Result of an intersection query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Overlap {
    Exact(BigUint),
    Undecidable,
}

/// A declared layer after removing every word already covered by an
/// earlier layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveLayer {
    /// Zero-based position in the declared list.
    pub declared_index: usize,
    pub spec: LayerSpec,
    pub declared_size: BigUint,
    /// Words removed because an earlier layer already covers them.
    pub removed: BigUint,
    pub size: BigUint,
}

/// Outcome of deduplicating a declared layer list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub layers: Vec<EffectiveLayer>,
    /// Layers whose words were all covered earlier.
    pub dropped: Vec<EffectiveLayer>,
    pub warnings: Vec<String>,
}

/// Exact `|a ∩ b|` when one side is explicit or both are exhaustive.
pub fn intersection_size(a: &LayerSpec, b: &LayerSpec, cap: u64) -> Result<Overlap> {
    if let (
        LayerSpec::Exhaustive { alphabet: aa, min_len: amin, max_len: amax },
        LayerSpec::Exhaustive { alphabet: ba, min_len: bmin, max_len: bmax },
    ) = (a, b)
    {
        let common = BigUint::from(aa.common_symbols(ba));
        let lo = *amin.max(bmin);
        let hi = *amax.min(bmax);
        let total = (lo..=hi).map(|n| common.pow(n as u32)).sum();
        return Ok(Overlap::Exact(total));
    }
    let (small, other) = match (a.is_explicit(cap), b.is_explicit(cap)) {
        (true, true) if b.cardinality() < a.cardinality() => (b, a),
        (true, _) => (a, b),
        (false, true) => (b, a),
        (false, false) => return Ok(Overlap::Undecidable),
    };
    let mut count = 0u64;
    for w in small.enumerate() {
        if other.contains(&w, cap)? {
            count += 1;
        }
    }
    Ok(Overlap::Exact(BigUint::from(count)))
}

/// Deduplicates `declared` so that each word belongs to the first layer
/// that contains it. Layers left empty are dropped with a warning. With
/// `assume_disjoint` the overlaps are taken to be zero without checking.
pub fn effective_layers(
    declared: &[LayerSpec],
    assume_disjoint: bool,
    cap: u64,
) -> Result<Stratification> {
    let mut out = Stratification { layers: Vec::new(), dropped: Vec::new(), warnings: Vec::new() };
    for (i, spec) in declared.iter().enumerate() {
        spec.validate()?;
        check_mangled_collisions(spec, cap)?;
        check_combined_injective(spec, cap)?;
        let declared_size = spec.cardinality();
        let removed = if assume_disjoint {
            BigUint::zero()
        } else {
            covered_by_earlier(spec, i, &out.layers, cap)?
        };
        let size = &declared_size - &removed;
        let layer =
            EffectiveLayer { declared_index: i, spec: spec.clone(), declared_size, removed, size };
        if layer.size.is_zero() {
            out.warnings.push(format!(
                "layer {} ({}) adds no new words and was dropped",
                i + 1,
                layer.spec
            ));
            out.dropped.push(layer);
        } else {
            out.layers.push(layer);
        }
    }
    Ok(out)
}

/// `|spec ∩ (earlier_1 ∪ … ∪ earlier_m)|`.
fn covered_by_earlier(
    spec: &LayerSpec,
    index: usize,
    earlier: &[EffectiveLayer],
    cap: u64,
) -> Result<BigUint> {
    if earlier.is_empty() {
        return Ok(BigUint::zero());
    }
    if spec.is_explicit(cap) {
        let mut count = 0u64;
        for w in spec.enumerate() {
            for e in earlier {
                if e.spec.contains(&w, cap)? {
                    count += 1;
                    break;
                }
            }
        }
        return Ok(BigUint::from(count));
    }

    let (explicit, implicit): (Vec<&EffectiveLayer>, Vec<&EffectiveLayer>) =
        earlier.iter().partition(|e| e.spec.is_explicit(cap));
    for h in &implicit {
        let both_exhaustive =
            matches!((spec, &h.spec), (LayerSpec::Exhaustive { .. }, LayerSpec::Exhaustive { .. }));
        if !both_exhaustive {
            return Err(Error::UndecidableOverlap {
                first: h.declared_index + 1,
                second: index + 1,
            });
        }
    }
    if implicit.len() > MAX_EXCLUSION_TERMS {
        return Err(Error::UndecidableOverlap {
            first: implicit[0].declared_index + 1,
            second: index + 1,
        });
    }

    // words shared with the large exhaustive layers, by inclusion-exclusion
    let shapes: Vec<&LayerSpec> = implicit.iter().map(|e| &e.spec).collect();
    let via_exhaustive = exhaustive_union_overlap(spec, &shapes);

    // remaining words come from explicit layers and are counted directly
    let mut pool: HashSet<String> = HashSet::new();
    for e in &explicit {
        pool.extend(e.spec.enumerate());
    }
    let mut direct = 0u64;
    for w in &pool {
        if !spec.contains(w, cap)? {
            continue;
        }
        let mut in_implicit = false;
        for h in &shapes {
            if h.contains(w, cap)? {
                in_implicit = true;
                break;
            }
        }
        if !in_implicit {
            direct += 1;
        }
    }
    Ok(via_exhaustive + BigUint::from(direct))
}

const MAX_EXCLUSION_TERMS: usize = 20;

#[derive(Clone)]
struct Shape {
    symbols: HashSet<char>,
    min_len: usize,
    max_len: usize,
}

impl Shape {
    fn of(spec: &LayerSpec) -> Shape {
        match spec {
            LayerSpec::Exhaustive { alphabet, min_len, max_len } => Shape {
                symbols: alphabet.symbols().iter().copied().collect(),
                min_len: *min_len,
                max_len: *max_len,
            },
            _ => unreachable!("only exhaustive layers have a shape"),
        }
    }

    fn meet(&self, other: &Shape) -> Shape {
        Shape {
            symbols: self.symbols.intersection(&other.symbols).copied().collect(),
            min_len: self.min_len.max(other.min_len),
            max_len: self.max_len.min(other.max_len),
        }
    }

    fn size(&self) -> BigUint {
        let base = BigUint::from(self.symbols.len());
        (self.min_len..=self.max_len).map(|n| base.pow(n as u32)).sum()
    }
}

fn exhaustive_union_overlap(spec: &LayerSpec, others: &[&LayerSpec]) -> BigUint {
    if others.is_empty() {
        return BigUint::zero();
    }
    let target = Shape::of(spec);
    let shapes: Vec<Shape> = others.iter().map(|s| Shape::of(s)).collect();
    let mut total = BigInt::zero();
    // iterate subsets as a depth-first walk, pruning empty meets
    fn walk(acc: &Shape, from: usize, depth: usize, shapes: &[Shape], total: &mut BigInt) {
        for j in from..shapes.len() {
            let next = acc.meet(&shapes[j]);
            if next.min_len > next.max_len || next.symbols.is_empty() {
                continue;
            }
            let size = BigInt::from(next.size());
            if depth.is_multiple_of(2) {
                *total += size;
            } else {
                *total -= size;
            }
            walk(&next, j + 1, depth + 1, shapes, total);
        }
    }
    walk(&target, 0, 0, &shapes, &mut total);
    total.to_biguint().expect("inclusion-exclusion total is non-negative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::{MangleRule, WordSource, DEFAULT_CAP};
    use crate::word::Alphabet;

    fn ex(symbols: &str, lo: usize, hi: usize) -> LayerSpec {
        LayerSpec::exhaustive(Alphabet::new(symbols, symbols.chars()).unwrap(), lo, hi).unwrap()
    }

    fn exact(n: u64) -> Overlap {
        Overlap::Exact(BigUint::from(n))
    }

    #[test]
    fn exhaustive_pairs() {
        let digits = LayerSpec::exhaustive(Alphabet::digits(), 4, 4).unwrap();
        let lower = LayerSpec::exhaustive(Alphabet::ascii_lower(), 4, 4).unwrap();
        let both = ex("0123456789abcdefghijklmnopqrstuvwxyz", 4, 4);
        assert_eq!(intersection_size(&digits, &lower, DEFAULT_CAP).unwrap(), exact(0));
        assert_eq!(intersection_size(&digits, &both, DEFAULT_CAP).unwrap(), exact(10_000));
        assert_eq!(
            intersection_size(&ex("ab", 1, 3), &ex("bc", 2, 5), DEFAULT_CAP).unwrap(),
            exact(2)
        );
    }

    #[test]
    fn undecidable_for_two_large_implicit_layers() {
        let words: Vec<String> = (0..4000).map(|i| format!("w{i}")).collect();
        let huge = WordSource::new("huge", words, Default::default()).unwrap();
        let mangled = LayerSpec::mangled(huge.clone(), vec![MangleRule::Leet]).unwrap();
        let combined = LayerSpec::combined(huge, 2, "").unwrap();
        assert_eq!(intersection_size(&mangled, &combined, 1000).unwrap(), Overlap::Undecidable);
        assert!(matches!(
            effective_layers(&[mangled.clone(), combined.clone()], false, 1000),
            Err(Error::UndecidableOverlap { first: 1, second: 2 })
        ));
        let assumed = effective_layers(&[mangled, combined], true, 1000).unwrap();
        assert_eq!(assumed.layers.len(), 2);
    }

    #[test]
    fn dedup_examples() {
        let digits = LayerSpec::exhaustive(Alphabet::digits(), 4, 4).unwrap();
        let list = LayerSpec::wordlist(WordSource::from_words("l", &["1234", "dragon"]).unwrap());
        let s = effective_layers(&[digits, list], false, DEFAULT_CAP).unwrap();
        let sizes: Vec<BigUint> = s.layers.iter().map(|l| l.size.clone()).collect();
        assert_eq!(sizes, [BigUint::from(10_000u32), BigUint::from(1u32)]);

        let a = LayerSpec::wordlist(WordSource::from_words("a", &["x", "y"]).unwrap());
        let b = LayerSpec::wordlist(WordSource::from_words("b", &["z"]).unwrap());
        let s = effective_layers(&[a.clone(), b], false, DEFAULT_CAP).unwrap();
        assert_eq!(s.layers[0].size, BigUint::from(2u32));
        assert_eq!(s.layers[1].size, BigUint::from(1u32));

        let s = effective_layers(&[a.clone(), a], false, DEFAULT_CAP).unwrap();
        assert_eq!(s.layers.len(), 1);
        assert_eq!(s.dropped.len(), 1);
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn union_overlap_is_not_double_counted() {
        // "11" sits in all three earlier layers
        let layers = [
            ex("1", 2, 2),
            ex("12", 2, 2),
            LayerSpec::wordlist(WordSource::from_words("l", &["11", "99"]).unwrap()),
            ex("0123456789", 2, 2),
        ];
        let s = effective_layers(&layers, false, 1).unwrap();
        let sizes: Vec<u64> = s.layers.iter().map(|l| u64::try_from(&l.size).unwrap()).collect();
        assert_eq!(sizes, [1, 3, 1, 95]);
    }
}
