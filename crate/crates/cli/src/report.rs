//! Report documents printed by the commands, as text or JSON.

use std::fmt::Write;

use serde::Serialize;

use crate::format::to_canonical_json;

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub elapsed_seconds: f64,
    pub failing_outcomes: Vec<usize>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub tolerance: f64,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn new(tolerance: f64, checks: Vec<CheckEntry>) -> Self {
        Self { passed: checks.iter().all(|c| c.passed), tolerance, checks }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<30} {:<6} {:>12} {:>12}", "check", "status", "max_residual", "time_ms");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<30} {:<6} {:>12.3e} {:>12.3}",
                c.name,
                status(c.passed),
                c.max_residual,
                c.elapsed_seconds * 1e3
            );
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            if !c.failing_outcomes.is_empty() {
                let list: Vec<String> = c.failing_outcomes.iter().map(usize::to_string).collect();
                let _ = writeln!(s, "{}: failing outcomes {}", c.name, list.join(", "));
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "{}: {w}", c.name);
            }
        }
        let _ = writeln!(s, "overall: {} (tol {:e})", status(self.passed), self.tolerance);
        s
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeLine {
    pub outcome: usize,
    pub eigenvalue: f64,
    pub weight: f64,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub passed: bool,
    pub outcomes: Vec<OutcomeLine>,
    pub trace_residual: f64,
    pub max_coherence: f64,
    pub samples: u64,
    pub seed: u64,
    pub generator: String,
}

impl CollapseReport {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>7} {:>22} {:>22} {:>10}", "outcome", "eigenvalue", "weight", "count");
        for o in &self.outcomes {
            let _ = writeln!(s, "{:>7} {:>22.16e} {:>22.16e} {:>10}", o.outcome, o.eigenvalue, o.weight, o.count);
        }
        let _ = writeln!(s, "trace residual: {:.3e}", self.trace_residual);
        let _ = writeln!(s, "max coherence:  {:.3e}", self.max_coherence);
        let _ = writeln!(s, "samples: {} (seed {}, {})", self.samples, self.seed, self.generator);
        let _ = writeln!(s, "overall: {}", status(self.passed));
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FormsReport {
    pub passed: bool,
    pub expectation_form: f64,
    pub born_form: f64,
    pub trace_form: f64,
    pub max_pairwise_difference: f64,
}

impl FormsReport {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "expectation <psi|P|psi>:  {:.16e}", self.expectation_form);
        let _ = writeln!(s, "overlap sum |<k|psi>|^2:  {:.16e}", self.born_form);
        let _ = writeln!(s, "trace tr(P|psi><psi|):    {:.16e}", self.trace_form);
        let _ = writeln!(s, "max pairwise difference:  {:.3e}", self.max_pairwise_difference);
        let _ = writeln!(s, "overall: {}", status(self.passed));
        s
    }
}
