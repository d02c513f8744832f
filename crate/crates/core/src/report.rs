//! Sample-based inequality check reports.

use serde::Serialize;

/// Outcome of verifying an inequality on sampled points.
///
/// `pass` is true iff every sampled point satisfied the inequality
/// (vacuous checks with zero samples pass).
#[derive(Debug, Clone, Serialize)]
pub struct BooleanReport {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    pub fraction_satisfied: f64,
    pub pass: bool,
}

impl BooleanReport {
    pub fn new(name: impl Into<String>, samples: usize, violations: usize) -> Self {
        let fraction = if samples == 0 {
            1.0
        } else {
            (samples - violations) as f64 / samples as f64
        };
        BooleanReport {
            name: name.into(),
            samples,
            violations,
            fraction_satisfied: fraction,
            pass: violations == 0,
        }
    }
}

impl std::fmt::Display for BooleanReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} [{} samples, {} violations]",
            self.name,
            if self.pass { "ok" } else { "FAIL" },
            self.samples,
            self.violations
        )
    }
}
