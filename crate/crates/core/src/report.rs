//! Named verification results with residuals, tolerances, and pass flags.

use std::fmt::Write as _;

/// Outcome of a check. Measurement-only checks report `NotApplicable` and
/// never fail a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not-applicable",
        }
    }
}

/// One named residual value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    pub name: String,
    pub value: f64,
}

impl ResidualEntry {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

/// Result of one verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: String,
    pub residuals: Vec<ResidualEntry>,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Assertable check: passes iff every residual value is at most the
    /// tolerance.
    pub fn asserted(
        check: impl Into<String>,
        inputs: impl Into<String>,
        residuals: Vec<ResidualEntry>,
        tolerance: f64,
        notes: Vec<String>,
    ) -> Self {
        let status = if residuals.iter().all(|r| r.value <= tolerance) {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            check: check.into(),
            inputs: inputs.into(),
            residuals,
            tolerance,
            status,
            notes,
        }
    }

    /// Measurement-only check: the residuals are recorded but carry no
    /// pass/fail meaning.
    pub fn measured(
        check: impl Into<String>,
        inputs: impl Into<String>,
        residuals: Vec<ResidualEntry>,
        notes: Vec<String>,
    ) -> Self {
        Self {
            check: check.into(),
            inputs: inputs.into(),
            residuals,
            tolerance: f64::NAN,
            status: CheckStatus::NotApplicable,
            notes,
        }
    }

    /// True unless the check explicitly failed.
    pub fn acceptable(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    /// Worst residual, used for one-line summaries.
    pub fn worst_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Structured-text rendering, one field per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "check: {}", self.check);
        let _ = writeln!(out, "inputs: {}", self.inputs);
        for entry in &self.residuals {
            let _ = writeln!(out, "residual {} = {:.6e}", entry.name, entry.value);
        }
        if self.tolerance.is_nan() {
            let _ = writeln!(out, "tolerance: n/a (measurement only)");
        } else {
            let _ = writeln!(out, "tolerance: {:.6e}", self.tolerance);
        }
        let _ = writeln!(out, "status: {}", self.status.label());
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}
