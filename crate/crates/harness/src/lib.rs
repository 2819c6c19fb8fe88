//! Verification harness: load a problem description, run the suites,
//! write a deterministic JSON report.
//!
//! Exit codes follow [`ExitStatus`]: 0 when every check passes, 1 when any
//! check fails, 2 when the problem description (or the command line) is
//! invalid.

pub mod report;
pub mod spec;
pub mod suites;

use rayon::prelude::*;

pub use report::Report;
pub use spec::{Problem, ProblemSpec, SpecError, DEMO_SPEC};
pub use suites::{CheckResult, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Fail = 1,
    SpecError = 2,
}

/// Command-line overrides of the values in the spec.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, p: &mut Problem) -> Result<(), SpecError> {
        if let Some(n) = self.samples {
            if n == 0 {
                return invalid("--samples", "must be at least 1");
            }
            p.samples = n;
        }
        if let Some(s) = self.seed {
            p.seed = s;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return invalid("--tol", "must be a positive finite number");
            }
            p.tolerance = t;
        }
        Ok(())
    }
}

fn invalid(location: &str, message: &str) -> Result<(), SpecError> {
    Err(SpecError::Invalid {
        location: location.into(),
        message: message.into(),
    })
}

/// Runs the selected suites (all of them when `selected` is empty) in the
/// fixed order of [`Suite::ALL`], concurrently, and assembles the report.
pub fn run(spec: &ProblemSpec, problem: &Problem, selected: &[Suite]) -> Report {
    let suites: Vec<Suite> = Suite::ALL
        .into_iter()
        .filter(|s| selected.is_empty() || selected.contains(s))
        .collect();
    let checks = suites
        .par_iter()
        .map(|&s| suites::run_suite(problem, s))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Report {
        checks,
        suites,
        samples: problem.samples,
        seed: problem.seed,
        tolerance: problem.tolerance,
        spec: spec.clone(),
    }
}
