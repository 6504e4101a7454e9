//! Machine-readable run reports.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Pass when `value` is strictly below `threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value.is_finite() && value < threshold,
        }
    }

    /// Pass when `value` (a defect or failure count) is at most `threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value.is_finite() && value <= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, config: serde_json::Value, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            command: command.into(),
            config,
            checks,
            pass,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One acceptance criterion: a named bundle of checks.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CriterionReport {
    pub fn new(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        CriterionReport {
            name: name.into(),
            checks,
            pass,
        }
    }

    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let worst = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} = {:.3e} (threshold {:.3e})", c.name, c.value, c.threshold))
            .collect::<Vec<_>>()
            .join("; ");
        if worst.is_empty() {
            format!("{status} {}", self.name)
        } else {
            format!("{status} {}: {worst}", self.name)
        }
    }
}
