//! Verification reports: named checks with witnesses, canonical JSON and hash.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witnesses: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, witnesses: Value) -> Self {
        Self { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, witnesses }
    }

    pub fn pass(name: impl Into<String>, witnesses: Value) -> Self {
        Self::new(name, true, witnesses)
    }

    pub fn fail(name: impl Into<String>, witnesses: Value) -> Self {
        Self::new(name, false, witnesses)
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skipped, witnesses: Value::String(reason.into()) }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Prefix the name, e.g. to group checks by degree.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}{}", self.name);
        self
    }
}

/// Collapse a family of checks into one: passes iff all members pass, with
/// the failing members (or a count) as witnesses.
pub fn summarize(name: impl Into<String>, checks: &[Check]) -> Check {
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    if failures.is_empty() {
        Check::pass(name, serde_json::json!({ "checked": checks.len() }))
    } else {
        Check::fail(
            name,
            serde_json::json!({
                "checked": checks.len(),
                "failed": failures.len(),
                "first_failures": failures.iter().take(5).map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>(),
            }),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub complex: String,
    pub degrees: Vec<usize>,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub data: BTreeMap<String, Value>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per check group; excluded from the canonical hash.
    #[serde(default)]
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, complex: &str, degrees: Vec<usize>, seed: u64) -> Self {
        Self {
            tool: "charrig".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            complex: complex.into(),
            degrees,
            seed,
            checks: Vec::new(),
            data: BTreeMap::new(),
            notes: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// The report without timings, as compact JSON with sorted object keys.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("timings_ms");
        }
        serde_json::to_string(&sort_keys(v)).expect("json")
    }

    pub fn canonical_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_timings() {
        let mut a = Report::new("inspect", "s1", vec![], 0);
        a.checks.push(Check::pass("x", Value::Null));
        let mut b = a.clone();
        b.timings_ms.insert("x".into(), 17);
        assert_eq!(a.canonical_hash(), b.canonical_hash());
        b.checks.push(Check::fail("y", Value::Null));
        assert_ne!(a.canonical_hash(), b.canonical_hash());
        assert!(!b.all_passed());
    }
}
