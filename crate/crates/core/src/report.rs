//! Pass/fail records shared by every verification suite.

use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Free-form residual: an exact expression, a float, or a short note.
    pub residual: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, residual: impl Into<String>) -> Self {
        Check { name: name.into(), pass, residual: residual.into() }
    }

    pub fn exact(name: impl Into<String>, pass: bool) -> Self {
        Self::new(name, pass, if pass { "0" } else { "nonzero" })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": if self.pass { "pass" } else { "fail" },
            "residual": self.residual,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.checks.iter().map(Check::to_json).collect())
    }
}

/// Exact scalar as `{shift, num, den, text}`.
pub fn scalar_json(v: &crate::coeff::QScalar) -> serde_json::Value {
    let mut m = serde_json::to_value(v).expect("scalar serializes");
    m.as_object_mut().unwrap().insert("text".into(), serde_json::Value::String(v.to_string()));
    m
}
