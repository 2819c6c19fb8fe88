//! Report assembly and serialization.
//!
//! Residuals and tolerances are written with 17 significant digits
//! (`{:.16e}`), so a report round-trips every `f64` and diffs cleanly.
//! Non-finite residuals are written as the strings `"inf"` / `"nan"`.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::spec::ProblemSpec;
use crate::suites::{CheckResult, Expect, Suite, Witness};

fn exact_number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"nan\"".to_string()
    } else {
        "\"inf\"".to_string()
    };
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    point: &'a [f64],
    lhs: &'a [f64],
    rhs: &'a [f64],
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    anchor: &'a str,
    samples: usize,
    expect: &'static str,
    max_residual: Option<Box<RawValue>>,
    failures: usize,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    errors: &'a [String],
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson<'a>>,
}

#[derive(Serialize)]
struct ConfigJson<'a> {
    suites: Vec<&'static str>,
    samples: usize,
    seed: u64,
    tolerance: Box<RawValue>,
    spec: &'a ProblemSpec,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    checks: Vec<CheckJson<'a>>,
    overall: &'static str,
    config_echo: ConfigJson<'a>,
}

/// Everything a run produced, in fixed suite order.
#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub spec: ProblemSpec,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let checks = self
            .checks
            .iter()
            .map(|c| CheckJson {
                name: &c.name,
                anchor: c.anchor,
                samples: c.samples,
                expect: match c.expect {
                    Expect::AtMost => "at_most_tolerance",
                    Expect::Exceeds => "exceeds_tolerance",
                },
                max_residual: c.max_residual.map(exact_number),
                failures: c.failures,
                errors: &c.errors,
                pass: c.pass,
                witness: c.witness.as_ref().map(|Witness { point, lhs, rhs }| WitnessJson { point, lhs, rhs }),
            })
            .collect();
        let doc = ReportJson {
            checks,
            overall: if self.pass() { "pass" } else { "fail" },
            config_echo: ConfigJson {
                suites: self.suites.iter().map(|s| s.name()).collect(),
                samples: self.samples,
                seed: self.seed,
                tolerance: exact_number(self.tolerance),
                spec: &self.spec,
            },
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    /// One line per check, for the terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let r = c.max_residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
            s.push_str(&format!(
                "{} {:<34} max residual {:>10}  failures {}/{}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                r,
                c.failures,
                c.samples
            ));
            for e in &c.errors {
                s.push_str(&format!("     {e}\n"));
            }
        }
        s.push_str(if self.pass() { "overall: pass\n" } else { "overall: fail\n" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(exact_number(0.1).get(), "1.0000000000000001e-1");
        assert_eq!(exact_number(0.0).get(), "0.0000000000000000e0");
        assert_eq!(exact_number(f64::INFINITY).get(), "\"inf\"");
        let back: f64 = serde_json::from_str(exact_number(1.0 / 3.0).get()).unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }
}
