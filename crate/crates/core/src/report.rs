//! Check results shared by every verification routine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::{Mode, Scalar, TOL};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `{pass, max_residual}` as emitted in per-check maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub pass: bool,
    pub max_residual: f64,
}

/// A batch of checks against one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: String,
    pub mode: Mode,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(target: impl Into<String>, mode: Mode) -> Self {
        VerificationReport { target: target.into(), mode, checks: Vec::new(), elapsed_ms: 0 }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `{check_name: {pass, max_residual}}`.
    pub fn outcomes(&self) -> BTreeMap<String, Outcome> {
        self.checks
            .iter()
            .map(|c| (c.name.clone(), Outcome { pass: c.pass, max_residual: c.max_residual }))
            .collect()
    }
}

/// Accumulates residuals for one check.
///
/// In rational mode any nonzero entry fails the check; in float mode an entry
/// fails once it exceeds the relative tolerance against the supplied scale.
#[derive(Debug, Clone)]
pub struct Tally {
    name: String,
    max: f64,
    failed: bool,
    samples: usize,
    seed: u64,
}

impl Tally {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Tally { name: name.into(), max: 0.0, failed: false, samples: 0, seed }
    }

    pub fn record<S: Scalar>(&mut self, residual: &[S], scale: f64) {
        self.samples += 1;
        for x in residual {
            self.record_value(x, scale);
        }
    }

    pub fn record_value<S: Scalar>(&mut self, x: &S, scale: f64) {
        let m = x.magnitude();
        self.max = self.max.max(m);
        let bad = match S::MODE {
            Mode::Rational => !x.is_zero_exact(),
            Mode::Float => m > TOL.rel * scale + TOL.abs,
        };
        self.failed |= bad;
    }

    /// Records a residual that was computed in `f64` regardless of mode.
    pub fn record_f64(&mut self, residual: f64, bound: f64) {
        self.samples += 1;
        self.max = self.max.max(residual);
        self.failed |= residual > bound || residual.is_nan();
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn count(&mut self) {
        self.samples += 1;
    }

    pub fn finish(self) -> Check {
        Check { name: self.name, pass: !self.failed, max_residual: self.max, samples: self.samples, seed: self.seed }
    }
}
