//! Acceptance checks, run without the libtest harness so that every
//! criterion prints its PASS/FAIL line. Exits non-zero if any fails.

use std::collections::HashSet;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use guesswork::sim::rng::trial_seed;
use guesswork::{
    add_letter_threshold, bf_cost, compare_short_long, mistake_bound, run_trials, simulate_attack,
    strength, threshold_short_prob, verify_analytic, Distribution, LayerSpec, MangleRule,
    Preferred, SimConfig, SimMode, Strategy, Target, Word, WordSource,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use statrs::distribution::{ChiSquared, ContinuousCDF};

// Tolerances.
const MEAN_REL_TOL: f64 = 0.01;
const MAX_RUNTIME: Duration = Duration::from_secs(5);
const CHI2_ALPHA: f64 = 0.001;
const Z: f64 = 3.0;
const SEED: u64 = 42;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn list_strategy(spec: &[(&str, usize)]) -> Strategy {
    let layers = spec
        .iter()
        .map(|&(prefix, n)| {
            let words: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
            LayerSpec::wordlist(WordSource::new(prefix, words, Default::default()).unwrap())
        })
        .collect();
    Strategy::new(layers).unwrap()
}

fn word(s: &str) -> Word {
    Word::new(s).unwrap()
}

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn guesswork(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_guesswork"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn machine_value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn seeded_runner(cases: u32) -> TestRunner {
    let config = Config { failure_persistence: None, ..Config::with_cases(cases) };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn brute_force_law() -> Check {
    let s = list_strategy(&[("w", 101)]);
    let started = Instant::now();
    let stats = run_trials(
        &s,
        &Distribution::single(Target::Layer(1)),
        &SimConfig::new(SimMode::Shuffle, 20_000, SEED),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let rel = (stats.mean - 51.0).abs() / 51.0;
    ensure(rel <= MEAN_REL_TOL, format!("mean {} is {rel:.4} away from 51", stats.mean))?;
    ensure(elapsed < MAX_RUNTIME, format!("took {elapsed:?}"))?;
    let bf = bf_cost(&BigUint::from(999u32)).unwrap();
    ensure(bf.value() == &ratio(500, 1), format!("bf(999) = {bf}"))?;
    Ok(format!("mean {:.4} (rel err {rel:.5}) in {elapsed:.2?}; bf(999) = {bf}", stats.mean))
}

fn uniform_success() -> Check {
    let n = 10usize;
    let trials = 10_000u64;
    let s = list_strategy(&[("w", n)]);
    let mut counts = vec![0u64; n];
    for i in 0..trials {
        let len = simulate_attack(&s, &word("w4"), trial_seed(SEED, i), SimMode::Shuffle, 100)
            .map_err(|e| e.to_string())?;
        let pos: usize = len.try_into().map_err(|_| "position overflow".to_string())?;
        counts[pos - 1] += 1;
    }
    let expected = trials as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(1.0 - CHI2_ALPHA);
    ensure(chi2 < critical, format!("chi2 {chi2:.3} >= {critical:.3}, counts {counts:?}"))?;
    Ok(format!("chi2 {chi2:.3} < {critical:.3} over {trials} trials"))
}

fn strength_oracle() -> Check {
    let s = list_strategy(&[("a", 5), ("b", 50), ("c", 945)]);
    let sizes: Vec<String> = s.layers().iter().map(|l| l.size.to_string()).collect();
    ensure(sizes == ["5", "50", "945"], format!("effective sizes {sizes:?}"))?;
    let mut notes = Vec::new();
    for (pw, analytic) in [("a3", ratio(3, 1)), ("b17", ratio(61, 2)), ("c500", ratio(528, 1))] {
        let got = strength(&s, &word(pw)).map_err(|e| e.to_string())?;
        ensure(got.strength.value() == &analytic, format!("{pw}: strength {}", got.strength))?;
        let r = verify_analytic(
            &s,
            &Distribution::single(Target::Word(word(pw))),
            &SimConfig::new(SimMode::Shuffle, 20_000, SEED),
            Z,
        )
        .map_err(|e| e.to_string())?;
        ensure(
            r.pass,
            format!("{pw}: mean {} vs {}, margin {}", r.stats.mean, got.strength, r.margin),
        )?;
        notes.push(format!("{}≈{:.2}", got.strength.to_decimal_string(1), r.stats.mean));
    }
    Ok(notes.join(", "))
}

fn threshold_flip() -> Check {
    let (s, l) = (BigUint::from(10u32), BigUint::from(90u32));
    let want = [(5, Preferred::LongFirst), (10, Preferred::Tie), (15, Preferred::ShortFirst)];
    for (pct, expected) in want {
        let c = compare_short_long(&s, &l, &ratio(pct, 100)).map_err(|e| e.to_string())?;
        ensure(c.better == expected, format!("p_short={pct}%: {:?}", c.better))?;
        if expected == Preferred::Tie {
            ensure(c.cost_short_first == c.cost_long_first, "tie is not exact")?;
        }
    }
    Ok("0.05 long first, 0.10 exact tie, 0.15 short first".into())
}

fn mistake_difference() -> Check {
    let mut runner = seeded_runner(100);
    let checked = std::cell::Cell::new(0u32);
    runner
        .run(&(1u64..=1_000_000, 1u64..=1_000_000), |(s, l)| {
            let m = mistake_bound(&s.into(), &l.into()).unwrap();
            prop_assert_eq!(m.difference, BigUint::from(s));
            checked.set(checked.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("difference = size_s for {} random pairs", checked.get()))
}

fn add_letter() -> Check {
    let t = add_letter_threshold(&BigUint::from(26u32)).map_err(|e| e.to_string())?;
    ensure(t == ratio(1, 27), format!("got {t}"))?;
    for m in 1..=6u32 {
        let short = BigUint::from(26u32).pow(m);
        let long = BigUint::from(26u32).pow(m + 1);
        let u = threshold_short_prob(&short, &long).map_err(|e| e.to_string())?;
        ensure(u == t, format!("m={m}: {u}"))?;
    }
    Ok("1/27 for m = 1..6".into())
}

/// `i` written as seven lowercase letters.
fn seven_letters(mut i: usize) -> String {
    let mut w = vec![b'a'; 7];
    for slot in w.iter_mut().rev() {
        *slot = b'a' + (i % 26) as u8;
        i /= 26;
    }
    String::from_utf8(w).unwrap()
}

fn search_space() -> Check {
    let words: Vec<String> = (0..23_000).map(seven_letters).collect();
    let source = WordSource::new("words", words, Default::default()).unwrap();
    let pairs = LayerSpec::combined(source.clone(), 2, "").unwrap().cardinality();
    ensure(pairs == BigUint::from(529_000_000u64), format!("pairs {pairs}"))?;
    let cased = LayerSpec::mangled(source.clone(), vec![MangleRule::AllCase]).unwrap();
    let size = cased.cardinality();
    ensure(size == BigUint::from(23_000u64 * 128), format!("case variants {size}"))?;
    // oracle: one word's block, listed and deduplicated by hand
    let block: HashSet<String> = (0u32..128)
        .map(|mask| {
            source.words()[0]
                .chars()
                .enumerate()
                .map(|(i, c)| if mask >> i & 1 == 1 { c.to_ascii_uppercase() } else { c })
                .collect()
        })
        .collect();
    ensure(block.len() == 128, format!("hand-built block has {}", block.len()))?;
    Ok(format!("{pairs} pairs, {size} = 23000 x 128 case variants"))
}

fn dictionary_merge() -> Check {
    let mut runner = seeded_runner(200);
    let dict = prop::collection::hash_set("[a-d]{1,3}", 1..12)
        .prop_map(|s| s.into_iter().collect::<Vec<String>>())
        .prop_shuffle();
    runner
        .run(&(dict.clone(), dict), |(d1, d2)| {
            let (m1, m2) = guesswork::merge_dictionaries(&d1, &d2).unwrap();
            let mut a = m1.clone();
            let mut b = m2.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(&m1[..d1.len()], &d1[..]);
            prop_assert_eq!(&m2[..d2.len()], &d2[..]);
            // each position is its own stratum: strength is the guess number
            for (orig, merged) in [(&d1, &m1), (&d2, &m2)] {
                let singles = |d: &[String]| {
                    Strategy::new(
                        d.iter()
                            .map(|w| LayerSpec::wordlist(WordSource::from_words(w, &[w]).unwrap()))
                            .collect(),
                    )
                    .unwrap()
                };
                let before = singles(orig);
                let after = singles(merged);
                for w in orig.iter() {
                    let w = word(w);
                    prop_assert_eq!(
                        strength(&before, &w).unwrap().strength,
                        strength(&after, &w).unwrap().strength
                    );
                }
                // the original list as one stratum, the appended words as a second
                let tail: Vec<String> = merged[orig.len()..].to_vec();
                let mut layers =
                    vec![LayerSpec::wordlist(WordSource::from_words("head", orig).unwrap())];
                if !tail.is_empty() {
                    layers
                        .push(LayerSpec::wordlist(WordSource::from_words("tail", &tail).unwrap()));
                }
                let two = Strategy::new(layers).unwrap();
                let one = Strategy::new(vec![LayerSpec::wordlist(
                    WordSource::from_words("head", orig).unwrap(),
                )])
                .unwrap();
                for w in orig.iter() {
                    let w = word(w);
                    prop_assert_eq!(
                        strength(&one, &w).unwrap().strength,
                        strength(&two, &w).unwrap().strength
                    );
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("200 random dictionary pairs".into())
}

fn determinism() -> Check {
    let dir = examples_dir();
    let strategy = dir.join("basic-attack.strategy");
    let dist = dir.join("toy-population.dist");
    let (strategy, dist) = (strategy.to_str().unwrap(), dist.to_str().unwrap());
    let mut outputs = Vec::new();
    for (mode, threads) in [
        ("shuffle", "1"),
        ("shuffle", "1"),
        ("shuffle", "4"),
        ("shuffle", "4"),
        ("rank", "1"),
        ("rank", "3"),
    ] {
        let (code, out, err) = guesswork(
            &[
                "--machine",
                "simulate",
                strategy,
                dist,
                "--trials",
                "3000",
                "--seed",
                "7",
                "--mode",
                mode,
                "--threads",
                threads,
                "--verify",
                "3",
            ],
            None,
        );
        ensure(code == 0, format!("exit {code}: {err}"))?;
        outputs.push(out);
    }
    ensure(outputs[0] == outputs[1], "serial repeat differs")?;
    ensure(outputs[0] == outputs[2], "parallel run differs from serial")?;
    ensure(outputs[2] == outputs[3], "parallel repeat differs")?;
    ensure(outputs[4] == outputs[5], "rank mode differs across thread counts")?;
    Ok("byte-identical machine output across repeats and 1/3/4 threads".into())
}

fn end_to_end() -> Check {
    let strategy = examples_dir().join("basic-attack.strategy");
    let strategy = strategy.to_str().unwrap();
    let (code, inspect, err) = guesswork(&["--machine", "inspect", strategy], None);
    ensure(code == 0, format!("inspect exit {code}: {err}"))?;
    let num = |key: &str| -> Result<BigUint, String> {
        machine_value(&inspect, key)
            .ok_or(format!("inspect lacks {key}"))?
            .parse()
            .map_err(|_| format!("{key} is not a number"))
    };
    let cum2 = num("layer.2.cumulative")?;
    let size3 = num("layer.3.size")?;
    let (code, out, err) = guesswork(&["--machine", "strength", strategy], Some("7077\n"));
    ensure(code == 0, format!("strength exit {code}: {err}"))?;
    ensure(machine_value(&out, "layer") == Some("3"), format!("layer line in {out:?}"))?;
    // cum_2 + (1 + |L_3|)/2 as a reduced fraction
    let doubled = BigUint::from(2u32) * &cum2 + 1u32 + &size3;
    let want = if &doubled % 2u32 == BigUint::from(0u32) {
        format!("{}/1", doubled / 2u32)
    } else {
        format!("{doubled}/2")
    };
    let got = machine_value(&out, "strength").unwrap_or_default();
    ensure(got == want, format!("strength {got}, inspect arithmetic gives {want}"))?;
    Ok(format!("7077 in layer 3, strength {got} = {cum2} + (1 + {size3})/2"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 brute-force cost law", brute_force_law),
        ("2 uniform success position", uniform_success),
        ("3 strength matches simulation", strength_oracle),
        ("4 threshold flip", threshold_flip),
        ("5 mistake bound", mistake_difference),
        ("6 add-letter threshold", add_letter),
        ("7 search-space arithmetic", search_space),
        ("8 dictionary merge", dictionary_merge),
        ("9 determinism", determinism),
        ("10 end-to-end strength", end_to_end),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
