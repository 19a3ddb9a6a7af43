//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

use super::Config;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    /// The property the check exercises.
    pub anchor: &'static str,
    #[serde(flatten)]
    pub verdict: CheckVerdict,
    pub payload: Value,
}

impl CheckRecord {
    pub fn new(name: &'static str, anchor: &'static str, passed: bool, payload: Value) -> Self {
        CheckRecord {
            name,
            anchor,
            verdict: if passed { CheckVerdict::Pass } else { CheckVerdict::Fail },
            payload,
        }
    }

    pub fn skipped(name: &'static str, anchor: &'static str, reason: impl Into<String>) -> Self {
        CheckRecord {
            name,
            anchor,
            verdict: CheckVerdict::Skipped { reason: reason.into() },
            payload: Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub status: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub config: Config,
}

impl VerificationReport {
    pub fn new(instance: String, status: String, checks: Vec<CheckRecord>, config: Config) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.verdict {
                CheckVerdict::Pass => summary.pass += 1,
                CheckVerdict::Fail => summary.fail += 1,
                CheckVerdict::Skipped { .. } => summary.skipped += 1,
            }
        }
        VerificationReport {
            instance,
            status,
            checks,
            summary,
            config,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No runnable check failed.
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("instance {} ({})\n", self.instance, self.status);
        for c in &self.checks {
            let verdict = match &c.verdict {
                CheckVerdict::Pass => "pass".to_string(),
                CheckVerdict::Fail => "FAIL".to_string(),
                CheckVerdict::Skipped { reason } => format!("skipped: {reason}"),
            };
            out.push_str(&format!("  {:<44} {verdict}\n", c.name));
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_and_serialization() {
        let r = VerificationReport::new(
            "x".into(),
            "positive".into(),
            vec![
                CheckRecord::new("a", "first", true, Value::Null),
                CheckRecord::new("b", "second", false, Value::Null),
                CheckRecord::skipped("c", "third", "no model"),
            ],
            Config::default(),
        );
        assert_eq!(
            r.summary,
            Summary {
                pass: 1,
                fail: 1,
                skipped: 1
            }
        );
        assert!(!r.passed());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["checks"][2]["verdict"], "skipped");
        assert_eq!(json["checks"][2]["reason"], "no model");
        assert_eq!(json["checks"][0]["verdict"], "pass");
        assert!(r.to_text().contains("skipped: no model"));
    }
}
