//! Report envelope shared by every command, with table and JSON renderers.

use std::fmt::Write as _;

use deloc_core::rrg::{CheckReport, NamedValue, Status};
use deloc_core::series::ZeroSectionReport;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub key: String,
    pub label: String,
    pub status: Status,
    pub values: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<ZeroSectionReport>,
}

impl Row {
    pub fn new(key: impl Into<String>, label: impl Into<String>) -> Self {
        Row {
            key: key.into(),
            label: label.into(),
            status: Status::Pass,
            values: Vec::new(),
            note: None,
            series: None,
        }
    }

    pub fn value(mut self, name: &str, value: impl ToString) -> Self {
        self.values.push(NamedValue {
            name: name.into(),
            value: value.to_string(),
        });
        self
    }

    /// Marks the row failed unless `ok`; the first reason sticks.
    pub fn require(mut self, ok: bool, reason: impl Into<String>) -> Self {
        if !ok {
            self.status = Status::Fail;
            self.note.get_or_insert_with(|| reason.into());
        }
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = Some(reason.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub row: String,
    pub label: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub rows: Vec<Row>,
    pub first_failure: Option<Witness>,
    pub notes: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, rows: Vec<Row>) -> Self {
        let first_failure = rows
            .iter()
            .find(|r| r.status == Status::Fail)
            .map(|r| Witness {
                row: r.key.clone(),
                label: r.label.clone(),
                reason: r.note.clone().unwrap_or_default(),
                monomial: r
                    .series
                    .as_ref()
                    .and_then(|s| s.first_difference.as_ref())
                    .map(|d| d.monomial.clone()),
            });
        let mut notes = Vec::new();
        if !rows.is_empty() && rows.iter().all(|r| r.status == Status::Skipped) {
            notes.push("all rows skipped".to_string());
        }
        Check {
            name: name.into(),
            passed: first_failure.is_none(),
            rows,
            first_failure,
            notes,
        }
    }

    pub fn failed(name: impl Into<String>, key: &str, reason: impl Into<String>) -> Self {
        Check::new(name, vec![Row::new(key, "").require(false, reason)])
    }

    pub fn from_report(name: impl Into<String>, report: CheckReport) -> Self {
        let rows = report
            .classes
            .into_iter()
            .map(|c| Row {
                key: format!("class {}", c.class),
                label: c.label,
                status: c.status,
                values: c.values,
                note: c.note,
                series: c.series,
            })
            .collect();
        let mut check = Check::new(format!("{}: {}", report.check, name.into()), rows);
        check.notes = report.notes;
        check
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub scenario_sha256: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, scenario_sha256: &str, checks: Vec<Check>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            scenario_sha256: scenario_sha256.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} (scenario {})",
            self.command,
            &self.scenario_sha256[..12.min(self.scenario_sha256.len())]
        );
        for check in &self.checks {
            render_check(&mut out, check);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "\n{verdict}: {} checks, {failed} failed",
            self.checks.len()
        );
        out
    }
}

fn status_tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skip",
    }
}

fn render_check(out: &mut String, check: &Check) {
    let _ = writeln!(
        out,
        "\n== {} [{}]",
        check.name,
        if check.passed { "PASS" } else { "FAIL" }
    );
    let key_w = check
        .rows
        .iter()
        .map(|r| r.key.chars().count())
        .max()
        .unwrap_or(0);
    let label_w = check
        .rows
        .iter()
        .map(|r| r.label.chars().count())
        .max()
        .unwrap_or(0);
    for r in &check.rows {
        let mut line = format!(
            "  {:<4} {:<key_w$}  {:<label_w$}",
            status_tag(r.status),
            r.key,
            r.label
        );
        for v in &r.values {
            let _ = write!(line, "  {}={}", v.name, v.value);
        }
        if r.status != Status::Pass {
            if let Some(note) = &r.note {
                let _ = write!(line, "  ({note})");
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    for (name, vector) in value_vectors(check) {
        let _ = writeln!(out, "  {name}: ({})", vector.join(", "));
    }
    if let Some(w) = &check.first_failure {
        let at = w
            .monomial
            .as_ref()
            .map(|m| format!(" at monomial {m}"))
            .unwrap_or_default();
        let label = if w.label.is_empty() {
            String::new()
        } else {
            format!(" {}", w.label)
        };
        let _ = writeln!(out, "  first failure: {}{label}: {}{at}", w.row, w.reason);
    }
    for note in &check.notes {
        let _ = writeln!(out, "  note: {note}");
    }
}

/// Per-name value vectors across class rows; skipped rows show `-`.
fn value_vectors(check: &Check) -> Vec<(String, Vec<String>)> {
    if check.rows.len() < 2 || !check.rows.iter().all(|r| r.key.starts_with("class ")) {
        return Vec::new();
    }
    let mut names: Vec<&str> = Vec::new();
    for r in &check.rows {
        for v in &r.values {
            if !names.contains(&v.name.as_str()) {
                names.push(&v.name);
            }
        }
    }
    names
        .into_iter()
        .filter_map(|name| {
            let vector: Vec<String> = check
                .rows
                .iter()
                .map(|r| {
                    r.values
                        .iter()
                        .find(|v| v.name == name)
                        .map_or("-".to_string(), |v| v.value.clone())
                })
                .collect();
            vector
                .iter()
                .all(|v| !v.contains(' '))
                .then(|| (name.to_string(), vector))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let ok = Check::new(
            "iso-spatial: a",
            vec![
                Row::new("class 0", "()").value("lhs", 3).value("rhs", 3),
                Row::new("class 1", "(1 2)").value("lhs", 1).value("rhs", 1),
                Row::new("class 2", "(1 2 3)").skip("not in the image"),
            ],
        );
        let bad = Check::new(
            "functoriality",
            vec![
                Row::new("class 0", "()").value("x", "1 + E(3)"),
                Row::new("class 1", "(1 2)")
                    .require(false, "lhs 2 ≠ rhs 1")
                    .require(false, "ignored"),
            ],
        );
        Report::new("rrg-iso", "0123456789abcdef", vec![ok, bad])
    }

    #[test]
    fn first_failure_and_verdict() {
        let report = sample();
        assert!(!report.passed);
        assert!(report.checks[0].passed && report.checks[0].first_failure.is_none());
        let w = report.checks[1].first_failure.as_ref().unwrap();
        assert_eq!(
            (w.row.as_str(), w.label.as_str(), w.reason.as_str()),
            ("class 1", "(1 2)", "lhs 2 ≠ rhs 1")
        );
        let skipped = Check::new("c", vec![Row::new("class 0", "").skip("no")]);
        assert!(skipped.passed);
        assert_eq!(skipped.notes, ["all rows skipped"]);
        assert_eq!(
            Check::failed("c", "block x", "broken")
                .first_failure
                .unwrap()
                .reason,
            "broken"
        );
    }

    #[test]
    fn table_layout() {
        let table = sample().to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "rrg-iso (scenario 0123456789ab)");
        assert!(table.contains("== iso-spatial: a [PASS]"));
        assert!(table.contains("  pass class 0  ()       lhs=3  rhs=3"));
        assert!(table.contains("  skip class 2  (1 2 3)  (not in the image)"));
        assert!(table.contains("  lhs: (3, 1, -)"));
        assert!(
            !table.contains("  x: ("),
            "vectors with spaces are not summarized"
        );
        assert!(table.contains("  first failure: class 1 (1 2): lhs 2 ≠ rhs 1"));
        assert_eq!(*lines.last().unwrap(), "FAIL: 2 checks, 1 failed");
    }

    #[test]
    fn json_envelope() {
        let json: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(json["schema_version"], SCHEMA_VERSION);
        assert_eq!(json["checks"][0]["rows"][2]["status"], "skipped");
        assert!(json["checks"][0]["rows"][0].get("note").is_none());
        assert_eq!(json["checks"][1]["first_failure"]["row"], "class 1");
    }
}
