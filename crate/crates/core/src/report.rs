//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Serialized nonzero residual, present on failures that have one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, id: impl Into<String>, status: Status, detail: Option<String>, residual: Option<Value>) {
        self.checks.push(CheckResult { id: id.into(), status, detail, residual });
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.push(id, Status::Pass, None, None);
    }

    pub fn pass_with(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.push(id, Status::Pass, Some(detail.into()), None);
    }

    pub fn fail(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.push(id, Status::Fail, Some(detail.into()), None);
    }

    pub fn fail_with_residual(&mut self, id: impl Into<String>, detail: impl Into<String>, residual: Value) {
        self.push(id, Status::Fail, Some(detail.into()), Some(residual));
    }

    pub fn skipped(&mut self, id: impl Into<String>, reason: impl Into<String>) {
        self.push(id, Status::Skipped, Some(reason.into()), None);
    }

    pub fn inconclusive(&mut self, id: impl Into<String>, reason: impl Into<String>) {
        self.push(id, Status::Inconclusive, Some(reason.into()), None);
    }

    /// Pass if `ok`, otherwise fail with `detail`.
    pub fn check(&mut self, id: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(id);
        } else {
            self.fail(id, detail());
        }
    }

    /// Pass if `residual` is `None`, otherwise fail and attach it.
    pub fn check_residual(&mut self, id: impl Into<String>, residual: Option<Value>, detail: &str) {
        match residual {
            None => self.pass(id),
            Some(r) => self.fail_with_residual(id, detail, r),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Prepends `prefix.` to every id.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.id = format!("{prefix}.{}", c.id);
        }
        self
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// JSON document with a summary block; key order is fixed.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "summary": {
                "total": self.checks.len(),
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skipped": self.count(Status::Skipped),
                "inconclusive": self.count(Status::Inconclusive),
            },
            "checks": self.checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_and_summary() {
        let mut r = VerificationReport::new();
        r.fail("b", "nope");
        r.pass("a");
        r.skipped("c", "no data");
        r.sort();
        assert_eq!(r.checks[0].id, "a");
        assert!(!r.all_pass());
        let j = r.to_json();
        assert_eq!(j["summary"]["fail"], 1);
        assert_eq!(j["checks"][2]["status"], "skipped");
        assert!(j["checks"][0].get("detail").is_none());
    }
}
