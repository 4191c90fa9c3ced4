use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{is_skippable, lines, tokens, ParseError, ParseErrorKind};
use crate::strategy::{Distribution, Target};
use crate::word::Word;

/// Parses `3`, `3/4` or `0.75` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((n, d)) = body.split_once('/') {
        if !digits(n) || !digits(d) {
            return None;
        }
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        BigRational::new(n.parse().ok()?, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !(digits(int) || int.is_empty()) || !digits(frac) {
            return None;
        }
        let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().ok()? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        BigRational::new(int * &scale + frac, scale)
    } else {
        if !digits(body) {
            return None;
        }
        BigRational::from_integer(body.parse().ok()?)
    };
    Some(if negative { -value } else { value })
}

/// One entry per line: `layer K weight W` or `password WORD weight W`.
/// Weights are normalized to sum to one.
pub fn parse_distribution(text: &str) -> Result<Distribution, ParseError> {
    let mut entries = Vec::new();
    let mut last_line = 1;
    for (line_no, line) in lines(text) {
        last_line = line_no;
        if is_skippable(line) {
            continue;
        }
        let toks = tokens(line);
        let [(kw_col, keyword), (target_col, target), (weight_kw_col, weight_kw), (w_col, weight)] =
            toks[..]
        else {
            let col = toks.first().map(|t| t.0).unwrap_or(1);
            return Err(ParseError::new(
                line_no,
                col,
                ParseErrorKind::Syntax(
                    "expected `layer K weight W` or `password WORD weight W`".into(),
                ),
            ));
        };
        if weight_kw != "weight" {
            return Err(ParseError::new(
                line_no,
                weight_kw_col,
                ParseErrorKind::Syntax("expected `weight`".into()),
            ));
        }
        let target = match keyword {
            "layer" => match target.parse::<usize>() {
                Ok(k) if k >= 1 && target.bytes().all(|b| b.is_ascii_digit()) => Target::Layer(k),
                _ => {
                    return Err(ParseError::new(
                        line_no,
                        target_col,
                        ParseErrorKind::Syntax(format!(
                            "layer index {target:?} is not a 1-based integer"
                        )),
                    ))
                }
            },
            "password" => Target::Word(Word::new(target).expect("tokens are non-empty")),
            other => {
                return Err(ParseError::new(
                    line_no,
                    kw_col,
                    ParseErrorKind::Syntax(format!("unknown entry kind {other:?}")),
                ))
            }
        };
        let w = parse_rational(weight).ok_or_else(|| {
            ParseError::new(
                line_no,
                w_col,
                ParseErrorKind::Syntax(format!("{weight:?} is not a rational number")),
            )
        })?;
        if !w.is_positive() {
            return Err(ParseError::new(
                line_no,
                w_col,
                ParseErrorKind::NonPositiveWeight(weight.into()),
            ));
        }
        entries.push((target, w));
    }
    Distribution::new(entries)
        .map_err(|_| ParseError::new(last_line, 1, ParseErrorKind::ZeroTotalWeight))
}
