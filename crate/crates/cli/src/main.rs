//! `guesswork`: password strength against layered guessing strategies.

mod report;

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use guesswork::ingest::{parse_distribution, parse_rational, parse_strategy};
use guesswork::sim::verify_analytic;
use guesswork::{
    add_letter_threshold, compare_short_long, compare_strategies, expected_cost, mistake_bound,
    run_trials, threshold_short_prob, Distribution, Error, Preferred, SimConfig, SimMode, Strategy,
    Winner, Word, DEFAULT_CAP,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};

use report::Report;

#[derive(Parser)]
#[command(
    name = "guesswork",
    version,
    about = "Password strength as the expected cost of a guessing attack"
)]
struct Cli {
    /// Print `key=value` lines with exact rationals instead of a table.
    #[arg(long, global = true)]
    machine: bool,

    /// Largest number of words any step may hold in memory.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show each effective layer with its declared, effective and cumulative size.
    Inspect { strategy: PathBuf },
    /// Strength of one password. Reads the password from stdin unless given.
    Strength {
        strategy: PathBuf,
        /// The password itself; it will end up in your shell history.
        #[arg(long)]
        password: Option<String>,
    },
    /// Expected attack cost against a password distribution.
    Cost { strategy: PathBuf, distribution: PathBuf },
    /// Expected cost of two strategies against the same distribution.
    Compare { strategy_a: PathBuf, strategy_b: PathBuf, distribution: PathBuf },
    /// Probability above which the short stratum should be tried first.
    Threshold(ThresholdArgs),
    /// Cost of trying the short stratum first when every password is long.
    Mistake {
        #[arg(long, value_parser = positive)]
        short: BigUint,
        #[arg(long, value_parser = positive)]
        long: BigUint,
    },
    /// Monte Carlo attacks against passwords drawn from a distribution.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_parser = positive, requires = "long", conflicts_with = "alphabet_size")]
    short: Option<BigUint>,
    #[arg(long, value_parser = positive, requires = "short")]
    long: Option<BigUint>,
    /// Also compare both orders at this probability of a short password.
    #[arg(long, value_parser = probability, requires = "short")]
    p_short: Option<BigRational>,
    /// Threshold for moving on to words one symbol longer.
    #[arg(long, value_parser = positive)]
    alphabet_size: Option<BigUint>,
}

#[derive(Args)]
struct SimulateArgs {
    strategy: PathBuf,
    distribution: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "shuffle")]
    mode: SimMode,
    /// Check the empirical mean against the analytic cost within Z standard errors.
    #[arg(long, value_name = "Z", value_parser = positive_real)]
    verify: Option<f64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    threads: u64,
}

fn positive(s: &str) -> Result<BigUint, String> {
    match s.parse::<BigUint>() {
        Ok(n) if n >= BigUint::one() => Ok(n),
        Ok(_) => Err("must be at least 1".into()),
        Err(_) => Err(format!("{s:?} is not a natural number")),
    }
}

fn probability(s: &str) -> Result<BigRational, String> {
    let p = parse_rational(s).ok_or_else(|| format!("{s:?} is not a number"))?;
    if p.is_negative() || p > BigRational::one() {
        return Err("must lie in [0, 1]".into());
    }
    Ok(p)
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(z) if z > 0.0 && z.is_finite() => Ok(z),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

enum Failure {
    Usage(String),
    Core { context: Option<String>, error: Error },
    VerifyFailed,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::Core { context: None, error }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::VerifyFailed => 6,
            Failure::Core { error, .. } => match error {
                Error::NotCovered { .. } => 3,
                Error::UndecidableOverlap { .. } => 4,
                Error::CapExceeded { .. } => 5,
                _ => 2,
            },
        }
    }
}

fn in_file(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |error| Failure::Core { context: Some(path.display().to_string()), error }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| {
        Failure::from(Error::Io { path: path.display().to_string(), message: e.to_string() })
    })?;
    String::from_utf8(bytes)
        .map_err(|_| Failure::Usage(format!("{} is not valid UTF-8", path.display())))
}

fn warn(lines: &[String]) {
    for w in lines {
        eprintln!("warning: {w}");
    }
}

fn load_strategy(path: &Path, cap: u64) -> Result<Strategy, Failure> {
    let text = read_text(path)?;
    let file = parse_strategy(&text).map_err(|e| in_file(path)(e.into()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let (strategy, warnings) = file.build(base, cap).map_err(|e| match e {
        Error::Parse(_) | Error::InvalidLayer(_) => in_file(path)(e),
        other => Failure::from(other),
    })?;
    warn(&warnings);
    Ok(strategy)
}

fn load_distribution(path: &Path) -> Result<Distribution, Failure> {
    let text = read_text(path)?;
    parse_distribution(&text).map_err(|e| in_file(path)(e.into()))
}

fn read_password(given: Option<String>) -> Result<Word, Failure> {
    let raw = match given {
        Some(p) => p,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read the password from stdin: {e}")))?;
            let s = s.strip_suffix('\n').map(|t| t.strip_suffix('\r').unwrap_or(t)).unwrap_or(&s);
            s.to_string()
        }
    };
    Word::new(raw).map_err(|_| Failure::Usage("the password is empty".into()))
}

fn inspect(strategy: &Strategy, machine: bool) -> String {
    let mut r = Report::new();
    let cum = strategy.cumulative();
    if machine {
        r.plain("layers", strategy.layers().len());
        for (i, l) in strategy.layers().iter().enumerate() {
            let k = i + 1;
            r.plain(format!("layer.{k}.declared_index"), l.declared_index + 1)
                .plain(format!("layer.{k}.kind"), l.spec.kind())
                .plain(format!("layer.{k}.spec"), &l.spec)
                .plain(format!("layer.{k}.declared_size"), &l.declared_size)
                .plain(format!("layer.{k}.removed"), &l.removed)
                .plain(format!("layer.{k}.size"), &l.size)
                .plain(format!("layer.{k}.cumulative"), &cum[k]);
        }
        r.plain("dropped", strategy.dropped().len());
        for (i, l) in strategy.dropped().iter().enumerate() {
            r.plain(format!("dropped.{}.declared_index", i + 1), l.declared_index + 1);
        }
        r.plain("total", strategy.total());
        return r.render(true);
    }
    let mut rows = vec![[
        "#".to_string(),
        "decl".into(),
        "declared".into(),
        "removed".into(),
        "effective".into(),
        "cumulative".into(),
        "layer".into(),
    ]];
    for (i, l) in strategy.layers().iter().enumerate() {
        rows.push([
            (i + 1).to_string(),
            (l.declared_index + 1).to_string(),
            l.declared_size.to_string(),
            l.removed.to_string(),
            l.size.to_string(),
            cum[i + 1].to_string(),
            l.spec.to_string(),
        ]);
    }
    for l in strategy.dropped() {
        rows.push([
            "-".into(),
            (l.declared_index + 1).to_string(),
            l.declared_size.to_string(),
            l.removed.to_string(),
            "0".into(),
            "-".into(),
            format!("{} (fully covered, dropped)", l.spec),
        ]);
    }
    let mut widths = [0usize; 7];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 6 {
                line.push_str(cell);
            } else if c >= 2 {
                line.push_str(&format!("{cell:>w$}  ", w = widths[c]));
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&format!("total {}\n", strategy.total()));
    out
}

fn preferred(p: Preferred) -> &'static str {
    match p {
        Preferred::ShortFirst => "short_first",
        Preferred::LongFirst => "long_first",
        Preferred::Tie => "tie",
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let machine = cli.machine;
    let cap = cli.cap;
    let mut r = Report::new();
    match cli.command {
        Command::Inspect { strategy } => {
            return Ok(inspect(&load_strategy(&strategy, cap)?, machine));
        }
        Command::Strength { strategy, password } => {
            let s = load_strategy(&strategy, cap)?;
            let pw = read_password(password)?;
            let rep = s.strength(&pw)?;
            r.plain("layer", rep.layer_index)
                .plain("preceding", &rep.preceding)
                .plain("layer_size", &rep.layer_size)
                .cost("strength", &rep.strength);
        }
        Command::Cost { strategy, distribution } => {
            let s = load_strategy(&strategy, cap)?;
            let d = load_distribution(&distribution)?;
            r.cost("expected_cost", &expected_cost(&s, &d)?);
        }
        Command::Compare { strategy_a, strategy_b, distribution } => {
            let a = load_strategy(&strategy_a, cap)?;
            let b = load_strategy(&strategy_b, cap)?;
            let d = load_distribution(&distribution)?;
            let c = compare_strategies(&a, &b, &d)?;
            let better = match c.better {
                Winner::A => "a",
                Winner::B => "b",
                Winner::Tie => "tie",
            };
            r.cost("cost_a", &c.cost_a).cost("cost_b", &c.cost_b).plain("better", better);
        }
        Command::Threshold(args) => match (args.short, args.long, args.alphabet_size) {
            (Some(s), Some(l), None) => {
                r.rational("threshold_short_prob", &threshold_short_prob(&s, &l)?);
                if let Some(p) = args.p_short {
                    let c = compare_short_long(&s, &l, &p)?;
                    r.rational("p_short", &p)
                        .cost("cost_short_first", &c.cost_short_first)
                        .cost("cost_long_first", &c.cost_long_first)
                        .plain("better", preferred(c.better));
                }
            }
            (None, None, Some(a)) => {
                r.rational("add_letter_threshold", &add_letter_threshold(&a)?);
            }
            _ => {
                return Err(Failure::Usage(
                    "give either --short and --long, or --alphabet-size".into(),
                ))
            }
        },
        Command::Mistake { short, long } => {
            let m = mistake_bound(&short, &long)?;
            r.plain("difference", &m.difference).rational("exact_ratio", &m.exact_ratio);
        }
        Command::Simulate(args) => {
            let s = load_strategy(&args.strategy, cap)?;
            let d = load_distribution(&args.distribution)?;
            let mut cfg = SimConfig::new(args.mode, args.trials, args.seed);
            cfg.materialize_cap = cap;
            cfg.threads = args.threads as usize;
            let (stats, verdict) = match args.verify {
                Some(z) => {
                    let v = verify_analytic(&s, &d, &cfg, z)?;
                    let pass = v.pass;
                    (v.stats.clone(), Some((v, pass)))
                }
                None => (run_trials(&s, &d, &cfg)?, None),
            };
            r.plain("mode", args.mode)
                .plain("trials", stats.count)
                .plain("seed", args.seed)
                .rational("mean", &stats.mean_exact)
                .plain("stddev", format!("{:.6}", stats.stddev))
                .plain("standard_error", format!("{:.6}", stats.standard_error))
                .plain("min", &stats.min)
                .plain("max", &stats.max);
            if let Some((v, pass)) = verdict {
                r.rational("analytic", v.analytic.value())
                    .plain("z", v.z)
                    .plain("deviation", format!("{:.6}", v.deviation))
                    .plain("margin", format!("{:.6}", v.margin))
                    .plain("verify", if pass { "pass" } else { "fail" });
                if !pass {
                    print!("{}", r.render(machine));
                    return Err(Failure::VerifyFailed);
                }
            }
        }
    }
    Ok(r.render(machine))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Core { context: Some(path), error } => eprintln!("error: {path}: {error}"),
                Failure::Core { context: None, error } => eprintln!("error: {error}"),
                Failure::VerifyFailed => {
                    eprintln!("error: the simulated mean is outside the verification margin")
                }
            }
            ExitCode::from(f.exit_code())
        }
    }
}
