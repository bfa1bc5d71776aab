//! Run reports: per-check statuses with witnesses, degree computations and
//! the classification, serialized deterministically.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::classify::{Applicability, ClassificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inapplicable,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inapplicable => "inapplicable",
            Status::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "holds" => Some(Status::Holds),
            "fails" => Some(Status::Fails),
            "inapplicable" => Some(Status::Inapplicable),
            "unknown" => Some(Status::Unknown),
            _ => None,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Nonzero residuals or a counterexample. Always present for `fails`.
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn holds(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Holds,
            witness: Vec::new(),
            note: None,
        }
    }

    /// A failing check. Panics if no witness is given.
    pub fn fails(name: impl Into<String>, witness: Vec<String>) -> Check {
        assert!(!witness.is_empty(), "a failing check needs a witness");
        Check {
            name: name.into(),
            status: Status::Fails,
            witness,
            note: None,
        }
    }

    pub fn with_status(name: impl Into<String>, status: Status, witness: Vec<String>) -> Check {
        if status == Status::Fails {
            return Check::fails(name, witness);
        }
        Check {
            name: name.into(),
            status,
            witness,
            note: None,
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Machine,
}

/// Configuration of a run, echoed into its report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub input: String,
    pub format: Format,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 0x5EED;

impl RunConfig {
    pub fn new(command: impl Into<String>, input: impl Into<String>) -> RunConfig {
        RunConfig {
            command: command.into(),
            input: input.into(),
            format: Format::Human,
            seed: DEFAULT_SEED,
            checks: Vec::new(),
            map: None,
            component: None,
            assertions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input_digest: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<Value>,
    pub classification: Option<ClassificationReport>,
    pub alarms: Vec<String>,
}

impl Report {
    pub fn new(input_digest: impl Into<String>, config: RunConfig) -> Report {
        Report {
            input_digest: input_digest.into(),
            config,
            checks: Vec::new(),
            degree: None,
            classification: None,
            alarms: Vec::new(),
        }
    }

    pub fn any_fails(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fails)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 3 on an alarm, 1 on a failing check, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.alarms.is_empty() {
            3
        } else if self.any_fails() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Human => human(report).into_bytes(),
    }
}

fn human(report: &Report) -> String {
    let mut out = String::new();
    let c = &report.config;
    let _ = writeln!(out, "{} {}", c.command, c.input);
    let _ = writeln!(out, "input digest: {}", report.input_digest);
    let _ = writeln!(out, "seed: {:#x}", c.seed);
    if !c.assertions.is_empty() {
        let _ = writeln!(out, "user assertions: {}", c.assertions.join(", "));
    }
    if !report.checks.is_empty() {
        let _ = writeln!(out, "\nchecks:");
        for ch in &report.checks {
            let _ = writeln!(out, "  [{:^12}] {}", ch.status.as_str(), ch.name);
            if let Some(n) = &ch.note {
                let _ = writeln!(out, "                 note: {n}");
            }
            for w in &ch.witness {
                let _ = writeln!(out, "                 {w}");
            }
        }
    }
    if let Some(d) = &report.degree {
        let _ = writeln!(out, "\ndegree:");
        write_value(&mut out, d, 2);
    }
    if let Some(cl) = &report.classification {
        let _ = writeln!(out, "\nclassification:");
        for t in &cl.theorems {
            let verdict = match &t.applicability {
                Applicability::Applies => "applies".to_string(),
                Applicability::FailsHypothesis(h) => format!("fails hypothesis: {h}"),
                Applicability::Undetermined => "undetermined".to_string(),
            };
            let _ = writeln!(out, "  {} ({})", t.id, verdict);
            for h in &t.hypotheses {
                let _ = writeln!(
                    out,
                    "      - {:<44} {:<14} [{}]",
                    h.name,
                    h.status.as_str(),
                    h.provenance
                );
            }
            for concl in &t.conclusions {
                let _ = writeln!(out, "      => {concl}");
            }
        }
        for n in &cl.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    if !report.alarms.is_empty() {
        let _ = writeln!(out, "\nALARMS:");
        for a in &report.alarms {
            let _ = writeln!(out, "  !! {a}");
        }
    }
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, val, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for i in items {
                            let _ = writeln!(out, "{pad}  -");
                            write_value(out, i, indent + 4);
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(val));
                    }
                }
            }
        }
        Value::Array(items) => {
            for i in items {
                write_value(out, i, indent);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
