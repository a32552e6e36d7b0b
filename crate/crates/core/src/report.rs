//! Pass/fail reports with stable check identifiers.
//!
//! Every verifier in the crate (algebra axioms, calculus identities, SBI
//! exactness, transport) emits one [`Check`] per identity instance. The
//! identifiers are a stable contract so scripts can grep for e.g.
//! `tt.eq1` or `ladder.Bprime.n2` in CI output.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    /// Failure witness, or occasionally an informational note on passes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Informational checks never fail the report as a whole.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Self {
        Check { id: id.into(), passed: true, witness: None, informational: false }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { id: id.into(), passed: false, witness: Some(witness.into()), informational: false }
    }

    pub fn from_bool(id: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        if ok {
            Check::pass(id)
        } else {
            Check::fail(id, witness)
        }
    }

    pub fn info(id: impl Into<String>, passed: bool, note: impl Into<String>) -> Self {
        Check { id: id.into(), passed, witness: Some(note.into()), informational: true }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// True when every non-informational check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            let mark = if c.informational { " (info)" } else { "" };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(out, "{status}{mark}  {}  -- {w}", c.id);
                }
                None => {
                    let _ = writeln!(out, "{status}{mark}  {}", c.id);
                }
            }
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed",
            if self.passed() { "OK" } else { "FAILED" },
            self.checks.len(),
            self.failures().count()
        );
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("id,passed,informational,witness\n");
        for c in &self.checks {
            let w = c.witness.as_deref().unwrap_or("").replace('"', "\"\"");
            let _ = writeln!(out, "{},{},{},\"{}\"", c.id, c.passed, c.informational, w);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn informational_checks_do_not_fail_report() {
        let mut r = Report::new("t");
        r.push(Check::pass("a"));
        r.push(Check::info("b", false, "measured, not required"));
        assert!(r.passed());
        r.push(Check::fail("c", "witness"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut r = Report::new("t");
        r.push(Check::fail("x.y", "z"));
        let s = r.render_json();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.render_json(), s);
    }
}
