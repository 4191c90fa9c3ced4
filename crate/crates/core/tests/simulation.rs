use guesswork::sim::rng::SplitMix64;
use guesswork::sim::{fisher_yates, shuffled_position, verify_against};
use guesswork::{
    expected_cost, run_trials, simulate_attack, verify_analytic, CostValue, Distribution, Error,
    LayerSpec, SimConfig, SimMode, Strategy, Target, Word, WordSource,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn lists(spec: &[(&str, usize)]) -> Strategy {
    let layers = spec
        .iter()
        .map(|&(prefix, n)| {
            let words: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
            LayerSpec::wordlist(WordSource::new(prefix, words, Default::default()).unwrap())
        })
        .collect();
    Strategy::new(layers).unwrap()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn word(s: &str) -> Word {
    Word::new(s).unwrap()
}

fn whole_layer(k: usize) -> Distribution {
    Distribution::single(Target::Layer(k))
}

fn three_layers() -> (Strategy, Distribution) {
    let s = lists(&[("a", 5), ("b", 50), ("c", 945)]);
    let d = Distribution::new(vec![
        (Target::Layer(1), ratio(1, 1)),
        (Target::Word(word("b7")), ratio(2, 1)),
        (Target::Layer(3), ratio(3, 1)),
    ])
    .unwrap();
    (s, d)
}

// Sums of attack lengths and of their squares over 1000 trials at seed 42,
// produced by tests/data/reference_sim.py, a separate implementation of the
// reference generator that shuffles whole lists literally.
const PINNED: [(&str, SimMode, u64, u64); 6] = [
    ("single", SimMode::Shuffle, 52327, 3565629),
    ("three", SimMode::Shuffle, 275433, 183942369),
    ("single", SimMode::Rank, 51226, 3474138),
    ("three", SimMode::Rank, 274890, 183803038),
    ("single", SimMode::Full, 52327, 3565629),
    ("three", SimMode::Full, 262318, 168802238),
];

#[test]
fn seed_42_matches_reference_implementation() {
    for (case, mode, sum, sum_sq) in PINNED {
        let (s, d) = match case {
            "single" => (lists(&[("w", 101)]), whole_layer(1)),
            _ => three_layers(),
        };
        let stats = run_trials(&s, &d, &SimConfig::new(mode, 1000, 42)).unwrap();
        assert_eq!(stats.sum, BigUint::from(sum), "{case} {mode}");
        assert_eq!(stats.sum_squares, BigUint::from(sum_sq), "{case} {mode}");
    }
}

#[test]
fn multiword_draws_match_reference_implementation() {
    let ten: Vec<String> = (0..10).map(|i| i.to_string()).collect();
    let digits = LayerSpec::wordlist(WordSource::from_words("d", &ten).unwrap());
    // the digits are printable too, so layer 2 is 95 + ... + 95^12 - 10 words
    let printable = LayerSpec::exhaustive(guesswork::Alphabet::ascii_printable(), 1, 12).unwrap();
    let s = Strategy::new(vec![digits, printable]).unwrap();
    let stats = run_trials(&s, &whole_layer(2), &SimConfig::new(SimMode::Rank, 100, 42)).unwrap();
    assert_eq!(stats.sum, "26173944897034277018750430".parse::<BigUint>().unwrap());
}

#[test]
fn shuffle_positions_are_uniform() {
    let n = 10usize;
    let trials = 100 * n as u64 * 10;
    let s = lists(&[("w", n)]);
    let mut counts = vec![0u64; n];
    for i in 0..trials {
        let seed = guesswork::sim::rng::trial_seed(7, i);
        let len = simulate_attack(&s, &word("w3"), seed, SimMode::Shuffle, 1000).unwrap();
        counts[usize::try_from(len).unwrap() - 1] += 1;
    }
    let expected = trials as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(1.0 - 0.001);
    assert!(chi2 < critical, "chi2 {chi2} >= {critical}, counts {counts:?}");
}

#[test]
fn attack_length_variance_matches_uniform() {
    let n = 101u64;
    let s = lists(&[("w", n as usize)]);
    let stats =
        run_trials(&s, &whole_layer(1), &SimConfig::new(SimMode::Shuffle, 50_000, 3)).unwrap();
    let want = (n * n - 1) as f64 / 12.0;
    let got = stats.stddev * stats.stddev;
    assert!((got - want).abs() / want < 0.05, "variance {got}, expected {want}");
}

#[test]
fn means_converge_to_layer_strengths() {
    let s = lists(&[("a", 5), ("b", 50), ("c", 945)]);
    for (pw, analytic) in [("a2", ratio(3, 1)), ("b9", ratio(61, 2)), ("c100", ratio(528, 1))] {
        let d = Distribution::single(Target::Word(word(pw)));
        assert_eq!(expected_cost(&s, &d).unwrap().value(), &analytic);
        let r =
            verify_analytic(&s, &d, &SimConfig::new(SimMode::Shuffle, 20_000, 11), 3.0).unwrap();
        assert!(r.pass, "{pw}: deviation {} margin {}", r.deviation, r.margin);
    }
}

#[test]
fn verification_examples() {
    let single = lists(&[("w", 101)]);
    let cfg = SimConfig::new(SimMode::Shuffle, 20_000, 5);
    assert!(verify_analytic(&single, &whole_layer(1), &cfg, 3.0).unwrap().pass);

    let two = lists(&[("a", 10), ("b", 100)]);
    let r = verify_analytic(&two, &whole_layer(2), &cfg, 3.0).unwrap();
    assert_eq!(r.analytic.value(), &ratio(121, 2));
    assert!(r.pass);

    let list = lists(&[("w", 100)]);
    let wrong = CostValue::new(ratio(101, 2) + ratio(10, 1));
    let r = verify_against(&list, &whole_layer(1), &cfg, 3.0, wrong).unwrap();
    assert!(!r.pass, "deviation {} margin {}", r.deviation, r.margin);
}

#[test]
fn mean_within_one_percent_for_101() {
    let s = lists(&[("w", 101)]);
    let stats =
        run_trials(&s, &whole_layer(1), &SimConfig::new(SimMode::Shuffle, 20_000, 42)).unwrap();
    assert!((stats.mean - 51.0).abs() / 51.0 < 0.01, "mean {}", stats.mean);
}

#[test]
fn one_word_layer_takes_one_guess() {
    let s = lists(&[("only", 1)]);
    let d = Distribution::single(Target::Word(word("only0")));
    let stats = run_trials(&s, &d, &SimConfig::new(SimMode::Shuffle, 100, 1)).unwrap();
    assert_eq!(stats.mean, 1.0);
    assert_eq!(stats.stddev, 0.0);
}

#[test]
fn parallel_runs_equal_serial_runs() {
    let (s, d) = three_layers();
    for mode in [SimMode::Shuffle, SimMode::Rank, SimMode::Full] {
        let serial = run_trials(&s, &d, &SimConfig::new(mode, 3000, 9)).unwrap();
        let again = run_trials(&s, &d, &SimConfig::new(mode, 3000, 9)).unwrap();
        let mut cfg = SimConfig::new(mode, 3000, 9);
        cfg.threads = 4;
        let parallel = run_trials(&s, &d, &cfg).unwrap();
        assert_eq!(serial, again);
        assert_eq!(serial, parallel);
    }
}

#[test]
fn full_dictionary_shuffle_agrees_with_layer_shuffle() {
    let (s, d) = three_layers();
    let analytic = expected_cost(&s, &d).unwrap();
    for mode in [SimMode::Full, SimMode::Shuffle, SimMode::Rank] {
        let r = verify_analytic(&s, &d, &SimConfig::new(mode, 20_000, 21), 3.0).unwrap();
        assert!(r.pass, "{mode}: deviation {} margin {}", r.deviation, r.margin);
        assert_eq!(r.analytic, analytic);
    }
}

#[test]
fn cap_and_coverage_errors() {
    let s = lists(&[("w", 50)]);
    let mut cfg = SimConfig::new(SimMode::Shuffle, 10, 1);
    cfg.materialize_cap = 10;
    assert!(matches!(run_trials(&s, &whole_layer(1), &cfg), Err(Error::CapExceeded { .. })));
    cfg.mode = SimMode::Rank;
    assert!(run_trials(&s, &whole_layer(1), &cfg).is_ok());
    let missing = Distribution::single(Target::Word(word("nope")));
    assert!(matches!(
        run_trials(&s, &missing, &SimConfig::new(SimMode::Shuffle, 10, 1)),
        Err(Error::NotCovered { .. })
    ));
    assert!(run_trials(&s, &whole_layer(2), &SimConfig::new(SimMode::Rank, 10, 1)).is_err());
}

proptest! {
    #[test]
    fn tracked_position_matches_literal_shuffle(n in 1usize..200, pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let index = pick.index(n);
        let mut items: Vec<usize> = (0..n).collect();
        fisher_yates(&mut items, &mut SplitMix64::new(seed));
        let literal = items.iter().position(|&x| x == index).unwrap();
        prop_assert_eq!(shuffled_position(n, index, &mut SplitMix64::new(seed)), literal);
    }

    #[test]
    fn bounded_draws_stay_in_range(m in 1u64.., seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        prop_assert!(rng.below(m) < m);
        let big = BigUint::from(m) << 70u32;
        prop_assert!(rng.below_big(&big) < big);
    }
}
