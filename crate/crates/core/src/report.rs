//! The machine-readable report shared by validation, completeness checks,
//! configuration diffs and verdicts.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::Value;

use crate::vocab::{Severity, Violation};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Finding {
    pub code: String,
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

impl Finding {
    pub fn violation(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            code: code.to_owned(),
            severity: Severity::Violation,
            subject: subject.into(),
            message: message.into(),
        }
    }

    pub fn warning(code: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Warning,
            ..Self::violation(code, subject, message)
        }
    }

    pub fn is_violation(&self) -> bool {
        self.severity == Severity::Violation
    }
}

impl From<Violation> for Finding {
    fn from(v: Violation) -> Self {
        Finding {
            code: v.rule_id,
            severity: v.severity,
            subject: v.focus_node.to_string(),
            message: v.message,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}: {}", self.severity, self.code, self.subject, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub kind: String,
    pub status: Status,
    pub summary: BTreeMap<String, Value>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            kind: kind.to_owned(),
            status: Status::Pass,
            summary: BTreeMap::new(),
            findings: Vec::new(),
        }
    }

    pub fn with_summary(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.to_owned(), value.into());
        self
    }

    pub fn with_findings(mut self, findings: impl IntoIterator<Item = Finding>) -> Self {
        self.findings.extend(findings);
        self
    }

    /// Fails when any finding has violation severity.
    pub fn status_from_findings(mut self) -> Self {
        self.status = if self.violation_count() > 0 {
            Status::Fail
        } else {
            Status::Pass
        };
        self
    }

    pub fn violation_count(&self) -> usize {
        self.findings.iter().filter(|f| f.is_violation()).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.kind, self.status);
        for (k, v) in &self.summary {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "  {k}: {shown}");
        }
        for f in &self.findings {
            let _ = writeln!(out, "  {f}");
        }
        out
    }
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..text.floor_char_boundary(offset)];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_violations() {
        let r = Report::new("validate").with_findings([Finding::warning("w", "s", "m")]).status_from_findings();
        assert_eq!(r.status, Status::Pass);
        let r = r.with_findings([Finding::violation("v", "s", "m")]).status_from_findings();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.violation_count(), 1);
    }

    #[test]
    fn json_shape() {
        let r = Report::new("check").with_summary("score", 1.0).with_findings([Finding::violation("R1", "<x>", "m")]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["status"], "pass");
        assert_eq!(v["findings"][0]["severity"], "violation");
        assert_eq!(v["summary"]["score"], 1.0);
    }

    #[test]
    fn line_column_counts_from_one() {
        let t = "ab\ncd\n";
        assert_eq!(line_column(t, 0), (1, 1));
        assert_eq!(line_column(t, 4), (2, 2));
        assert_eq!(line_column(t, 100), (3, 1));
    }
}
