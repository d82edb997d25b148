use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Where an expected value comes from.
pub const REFERENCE: &str = "reference value";
pub const CLOSED_FORM: &str = "closed form";
pub const CROSS_CHECK: &str = "cross-check";
pub const REQUESTED: &str = "requested";

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ok: Option<bool>,
}

impl Item {
    pub fn info(name: impl Into<String>, value: impl Into<Value>) -> Self {
        Item { name: name.into(), value: value.into(), expected: None, basis: None, ok: None }
    }

    /// Compares `value` with `expected` for equality.
    pub fn check(name: impl Into<String>, value: impl Into<Value>, expected: impl Into<Value>, basis: &'static str) -> Self {
        let (value, expected) = (value.into(), expected.into());
        let ok = value == expected;
        Item { name: name.into(), value, expected: Some(expected), basis: Some(basis), ok: Some(ok) }
    }

    /// A check whose outcome is decided by the caller, e.g. an inequality.
    pub fn judged(name: impl Into<String>, value: impl Into<Value>, expected: impl Into<Value>, basis: &'static str, ok: bool) -> Self {
        Item { name: name.into(), value: value.into(), expected: Some(expected.into()), basis: Some(basis), ok: Some(ok) }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub case: String,
    pub ok: bool,
    pub items: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, case: String, items: Vec<Item>) -> Self {
        let ok = items.iter().all(|i| i.ok != Some(false));
        Report { command, case, ok, items, error: None }
    }

    pub fn failed(command: &'static str, case: String, error: String) -> Self {
        Report { command, case, ok: false, items: Vec::new(), error: Some(error) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let status = if self.ok { "pass" } else { "FAIL" };
        let _ = writeln!(s, "[{status}] {} {}", self.command, self.case);
        for item in &self.items {
            let _ = write!(s, "  {} = {}", item.name, show(&item.value));
            if let (Some(e), Some(b)) = (&item.expected, item.basis) {
                let _ = write!(s, "  (expected {}, {b})", show(e));
            }
            match item.ok {
                Some(true) => s.push_str("  ok"),
                Some(false) => s.push_str("  MISMATCH"),
                None => {}
            }
            s.push('\n');
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "  error: {e}");
        }
        s
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(show).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Summary {
    pub command: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[Report]) -> Self {
        let passed = reports.iter().filter(|r| r.ok).count();
        Summary { command: "summary", cases: reports.len(), passed, failed: reports.len() - passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }

    pub fn to_text(&self) -> String {
        format!("battery: {} cases, {} passed, {} failed\n", self.cases, self.passed, self.failed)
    }
}
