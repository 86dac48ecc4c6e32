use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "theta-atlas/1";

/// Envelope shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub precision_bits: usize,
    /// Truncation orders and sample counts used.
    pub orders: BTreeMap<String, u64>,
    pub parameters: Value,
    /// Every verification predicate in `result`, by name.
    pub checks: BTreeMap<String, bool>,
    pub passed: bool,
    pub result: Value,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: &str, precision_bits: usize, parameters: Value, result: Value) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            precision_bits,
            orders: BTreeMap::new(),
            parameters,
            checks: BTreeMap::new(),
            passed: true,
            result,
            wall_time_ms: 0,
        }
    }

    pub fn order(mut self, name: &str, value: usize) -> Self {
        self.orders.insert(name.to_string(), value as u64);
        self
    }

    pub fn check(mut self, name: &str, ok: bool) -> Self {
        self.checks.insert(name.to_string(), ok);
        self.passed = self.checks.values().all(|&c| c);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn passed_tracks_checks() {
        let r = Report::new("x", 256, json!({}), json!(null)).check("a", true);
        assert!(r.passed);
        let r = r.check("b", false).check("c", true);
        assert!(!r.passed);
    }

    #[test]
    fn json_round_trip() {
        let r = Report::new("count", 256, json!({"q": [0.1, 0.0]}), json!({"count": 3, "residual": 1.5e-9}))
            .order("points", 512)
            .check("count_matches", true);
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }
}
