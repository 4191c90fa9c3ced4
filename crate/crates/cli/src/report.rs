//! Key/value output in two renderings: `key=value` lines for scripts and an
//! aligned table for people.

use std::fmt::Write as _;

use guesswork::CostValue;
use num_rational::BigRational;

pub struct Report {
    rows: Vec<(String, String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report { rows: Vec::new() }
    }

    /// A value printed the same way in both modes.
    pub fn plain(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        let v = value.to_string();
        self.rows.push((key.into(), v.clone(), v));
        self
    }

    /// An exact rational: `n/d` for scripts, four decimals for people.
    pub fn rational(&mut self, key: impl Into<String>, value: &BigRational) -> &mut Self {
        let c = CostValue::new(value.clone());
        self.rows.push((key.into(), c.to_fraction_string(), c.to_decimal_string(4)));
        self
    }

    /// A guess count, followed by its bits figure in human mode.
    pub fn cost(&mut self, key: impl Into<String>, value: &CostValue) -> &mut Self {
        let key = key.into();
        let bits = value.to_bits().unwrap_or(f64::NAN);
        self.rows.push((
            key.clone(),
            value.to_fraction_string(),
            format!("{} ({bits:.4} bits)", value.to_decimal_string(4)),
        ));
        self.rows.push((format!("{key}_bits"), format!("{bits:.6}"), String::new()));
        self
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if machine {
            for (k, m, _) in &self.rows {
                let _ = writeln!(out, "{k}={m}");
            }
        } else {
            let shown: Vec<_> = self.rows.iter().filter(|r| !r.2.is_empty()).collect();
            let width = shown.iter().map(|r| r.0.len()).max().unwrap_or(0);
            for (k, _, h) in shown {
                let label = k.replace('_', " ");
                let _ = writeln!(out, "{label:<width$}  {h}");
            }
        }
        out
    }
}
