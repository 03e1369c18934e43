use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The hypotheses of the underlying statement are not met by the inputs.
    NotApplicable,
    /// Only part of the requested measurement could be made.
    Partial,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::Partial => "partial",
        }
    }
}

/// Time interval and spatial half-width `|x| <= x_max` a check looked at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t_min: f64,
    pub t_max: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub measured: BTreeMap<String, Value>,
    pub tolerance: f64,
    pub window: Window,
}

impl CheckResult {
    pub fn new(name: &str, window: Window, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            status: Status::NotApplicable,
            measured: BTreeMap::new(),
            tolerance,
            window,
        }
    }

    pub fn not_applicable(name: &str, reason: &str) -> Self {
        let mut r = Self::new(
            name,
            Window {
                t_min: 0.0,
                t_max: 0.0,
                x_max: 0.0,
            },
            0.0,
        );
        r.note("reason", reason);
        r
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn measure(&mut self, key: &str, value: f64) {
        self.measured.insert(key.to_string(), Value::from(value));
    }

    pub fn measure_list(&mut self, key: &str, values: &[f64]) {
        self.measured.insert(key.to_string(), Value::from(values.to_vec()));
    }

    pub fn note(&mut self, key: &str, text: &str) {
        self.measured.insert(key.to_string(), Value::from(text));
    }

    pub fn flag(&mut self, key: &str, on: bool) {
        self.measured.insert(key.to_string(), Value::from(on));
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.measured.get(key).and_then(Value::as_f64)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub meta: BTreeMap<String, Value>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True unless some check failed.
    pub fn succeeded(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Sorts checks by name; duplicate names are a configuration error.
pub fn build_report(mut checks: Vec<CheckResult>, meta: BTreeMap<String, Value>) -> Result<VerificationReport> {
    let mut seen = BTreeSet::new();
    for c in &checks {
        if !seen.insert(c.name.clone()) {
            return Err(Error::Config(format!("duplicate check name `{}`", c.name)));
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerificationReport { meta, checks })
}
