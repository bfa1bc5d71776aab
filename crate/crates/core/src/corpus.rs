//! The bundled example corpus: problem files paired with expectation files.
//!
//! An expectation file is TOML:
//!
//! ```toml
//! description = "..."
//! notes = ["..."]
//!
//! [verify]
//! exit = 1
//! [verify.status]
//! "first_integral:F:X1" = "fails"
//! [verify.residuals]
//! "first_integral:F:X1" = ["df2(X1) = -6*x1^2*x3*x4 - 6*x2^2*x3*x4"]
//!
//! [harmonic]
//! lambda_sq = "4*x^2 + 4*y^2"
//!
//! [[degree]]
//! component = 1
//! mu = "1"
//! degree = 1
//!
//! [classify]
//! exit = 0
//! [classify.theorems]
//! milnor_tube_fibration = "applies"
//! [classify.values]
//! "euler_characteristic.chi" = 0
//! ```
//!
//! Residual lines are compared label by label, the polynomial after `=`
//! being parsed in the problem's variables, so expectations may be written
//! in any term order.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::harmonic::gram;
use crate::parse::parse_polynomial;
use crate::pipeline;
use crate::problem::ProblemSpec;
use crate::report::{Report, RunConfig, Status};

/// One bundled example.
#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub problem: String,
    pub expect: String,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name,
            include_str!(concat!("../corpus/", $name, ".prob")),
            include_str!(concat!("../corpus/", $name, ".expect.toml")))),*]
    };
}

const BUNDLED: &[(&str, &str, &str)] = bundled!(
    "cubic_pair_forms",
    "cubic_r4",
    "dim_sing_positive",
    "foliation_r4",
    "hopf",
    "hopf_s3_s2",
    "quaternionic",
    "quintic_r4",
    "r3_field",
    "r8_pair",
    "r8_to_r3",
    "re_z3",
    "x_squared",
);

/// The entries compiled into the binary, sorted by name.
pub fn bundled() -> Vec<Entry> {
    let mut v: Vec<Entry> = BUNDLED
        .iter()
        .map(|(n, p, e)| Entry {
            name: n.to_string(),
            problem: p.to_string(),
            expect: e.to_string(),
        })
        .collect();
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

/// Entries read from `dir`: every `NAME.prob` with a sibling `NAME.expect.toml`.
pub fn from_dir(dir: &Path) -> Result<Vec<Entry>> {
    let io = |p: &Path, e: std::io::Error| Error::Io {
        path: p.display().to_string(),
        message: e.to_string(),
    };
    let rd = std::fs::read_dir(dir).map_err(|e| io(dir, e))?;
    let mut out = Vec::new();
    for item in rd {
        let path = item.map_err(|e| io(dir, e))?.path();
        let Some(name) = path
            .file_name()
            .and_then(|s| s.to_str())
            .and_then(|s| s.strip_suffix(".prob"))
        else {
            continue;
        };
        let expect_path = dir.join(format!("{name}.expect.toml"));
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| io(p, e));
        out.push(Entry {
            name: name.to_string(),
            problem: read(&path)?,
            expect: read(&expect_path)?,
        });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Expectation {
    description: String,
    #[serde(default)]
    notes: Vec<String>,
    verify: Option<VerifyExpect>,
    harmonic: Option<HarmonicExpect>,
    #[serde(default)]
    degree: Vec<DegreeExpect>,
    classify: Option<ClassifyExpect>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyExpect {
    exit: i32,
    #[serde(default)]
    checks: Vec<String>,
    #[serde(default)]
    status: IndexMap<String, String>,
    #[serde(default)]
    residuals: IndexMap<String, Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HarmonicExpect {
    map: Option<String>,
    lambda_sq: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeExpect {
    map: Option<String>,
    component: usize,
    mu: String,
    degree: Option<i64>,
    #[serde(default)]
    exit: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyExpect {
    exit: i32,
    map: Option<String>,
    #[serde(default)]
    assertions: Vec<String>,
    #[serde(default)]
    theorems: IndexMap<String, String>,
    #[serde(default)]
    values: IndexMap<String, toml::Value>,
}

/// Outcome of one entry.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EntryResult {
    pub name: String,
    pub description: String,
    pub passed: bool,
    pub mismatches: Vec<String>,
    /// Per-command reports, keyed `verify`, `degree:<k>`, `classify`.
    pub reports: BTreeMap<String, Value>,
}

fn mismatch(out: &mut Vec<String>, what: impl Into<String>) {
    out.push(what.into());
}

fn split_line(line: &str) -> Option<(&str, &str)> {
    line.rsplit_once(" = ")
}

fn compare_residuals(problem: &ProblemSpec, check: &str, expected: &[String], got: &[String], out: &mut Vec<String>) {
    let mut want: Vec<(String, Option<crate::Poly>)> = Vec::new();
    for e in expected {
        match split_line(e) {
            Some((label, poly)) => want.push((label.to_string(), parse_polynomial(poly, &problem.context).ok())),
            None => mismatch(out, format!("{check}: malformed expected residual `{e}`")),
        }
    }
    if want.len() != got.len() {
        mismatch(
            out,
            format!("{check}: expected {} residual lines, got {}", want.len(), got.len()),
        );
    }
    for (label, poly) in &want {
        let hit = got.iter().any(|g| {
            split_line(g).is_some_and(|(gl, gp)| {
                gl == label
                    && match (poly, parse_polynomial(gp, &problem.context)) {
                        (Some(p), Ok(q)) => *p == q,
                        _ => false,
                    }
            })
        });
        if !hit {
            mismatch(out, format!("{check}: expected residual `{label}` not reproduced"));
        }
    }
}

fn theorem_verdict(t: &crate::classify::TheoremApplication) -> String {
    match &t.applicability {
        crate::classify::Applicability::FailsHypothesis(h) => format!("fails_hypothesis:{h}"),
        a => a.as_str().to_string(),
    }
}

/// Looks up `facts.a.b` or `<theorem id>.a.b` in a classification.
fn classification_value(cl: &crate::classify::ClassificationReport, path: &str) -> Option<Value> {
    let mut parts = path.split('.');
    let head = parts.next()?;
    let mut v = if head == "facts" {
        cl.facts.clone()
    } else {
        cl.theorem(head)?.payload.clone()
    };
    for p in parts {
        v = match v {
            Value::Object(mut m) => m.remove(p)?,
            Value::Array(mut a) => {
                let i: usize = p.parse().ok()?;
                if i >= a.len() {
                    return None;
                }
                a.swap_remove(i)
            }
            _ => return None,
        };
    }
    Some(v)
}

fn json_matches(expected: &toml::Value, got: &Value) -> bool {
    match (expected, got) {
        (toml::Value::Integer(a), Value::Number(b)) => b.as_i64() == Some(*a),
        (toml::Value::Float(a), Value::Number(b)) => b.as_f64() == Some(*a),
        (toml::Value::Boolean(a), Value::Bool(b)) => a == b,
        (toml::Value::String(a), Value::String(b)) => a == b,
        (toml::Value::String(a), Value::Null) => a == "null",
        (toml::Value::Array(a), Value::Array(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| json_matches(x, y))
        }
        _ => false,
    }
}

fn config(command: &str, entry: &str, seed: u64) -> RunConfig {
    let mut c = RunConfig::new(command, format!("corpus:{entry}"));
    c.seed = seed;
    c
}

/// Runs every expectation of one entry.
pub fn run_entry(entry: &Entry, seed: u64) -> EntryResult {
    let mut mismatches = Vec::new();
    let mut reports = BTreeMap::new();
    let mut description = String::new();
    let outcome = (|| -> Result<()> {
        let problem: ProblemSpec = entry.problem.parse()?;
        let exp: Expectation =
            toml::from_str(&entry.expect).map_err(|e| Error::Schema(format!("{}.expect.toml: {e}", entry.name)))?;
        description = exp.description.clone();
        let _ = &exp.notes;

        if let Some(v) = &exp.verify {
            let mut cfg = config("verify", &entry.name, seed);
            cfg.checks = v.checks.clone();
            let r = pipeline::verify(&problem, cfg)?;
            check_verify(&problem, v, &r, &mut mismatches);
            reports.insert("verify".to_string(), r.to_json());
        }
        if let Some(h) = &exp.harmonic {
            let (_, map) = problem.map(h.map.as_deref())?;
            let want = parse_polynomial(&h.lambda_sq, &problem.context)?;
            match gram(map).lambda_sq {
                Some(l) if l == want => {}
                Some(l) => mismatch(&mut mismatches, format!("harmonic: λ² = {l}, expected {want}")),
                None => mismatch(&mut mismatches, "harmonic: map is not horizontally weakly conformal"),
            }
        }
        for d in &exp.degree {
            let mut cfg = config("degree", &entry.name, seed);
            cfg.component = Some(d.component);
            cfg.map = d.map.clone();
            let r = pipeline::degree(&problem, cfg)?;
            let tag = format!("degree:{}", d.component);
            if r.exit_code() != d.exit {
                mismatch(&mut mismatches, format!("{tag}: exit {} != {}", r.exit_code(), d.exit));
            }
            let dv = r.degree.clone().unwrap_or(Value::Null);
            let mu = dv.get("milnor_number").and_then(Value::as_str).unwrap_or("");
            if mu != d.mu {
                mismatch(&mut mismatches, format!("{tag}: μ = {mu}, expected {}", d.mu));
            }
            let got = dv.get("degree").and_then(Value::as_i64);
            if got != d.degree {
                mismatch(
                    &mut mismatches,
                    format!("{tag}: degree {got:?}, expected {:?}", d.degree),
                );
            }
            reports.insert(tag, r.to_json());
        }
        if let Some(c) = &exp.classify {
            let mut cfg = config("classify", &entry.name, seed);
            cfg.assertions = c.assertions.clone();
            cfg.map = c.map.clone();
            let r = pipeline::classify(&problem, cfg)?;
            check_classify(c, &r, &mut mismatches);
            reports.insert("classify".to_string(), r.to_json());
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        mismatch(&mut mismatches, format!("error: {e}"));
    }
    EntryResult {
        name: entry.name.clone(),
        description,
        passed: mismatches.is_empty(),
        mismatches,
        reports,
    }
}

fn check_verify(problem: &ProblemSpec, v: &VerifyExpect, r: &Report, out: &mut Vec<String>) {
    if r.exit_code() != v.exit {
        mismatch(out, format!("verify: exit {} != {}", r.exit_code(), v.exit));
    }
    for (name, want) in &v.status {
        match r.check(name) {
            None => mismatch(out, format!("verify: no check named {name}")),
            Some(c) => {
                if Status::parse(want) != Some(c.status) {
                    mismatch(out, format!("verify: {name} is {}, expected {want}", c.status.as_str()));
                }
            }
        }
    }
    for (name, lines) in &v.residuals {
        if let Some(c) = r.check(name) {
            compare_residuals(problem, name, lines, &c.witness, out);
        }
    }
}

fn check_classify(c: &ClassifyExpect, r: &Report, out: &mut Vec<String>) {
    if r.exit_code() != c.exit {
        mismatch(
            out,
            format!(
                "classify: exit {} != {} (alarms: {:?})",
                r.exit_code(),
                c.exit,
                r.alarms
            ),
        );
    }
    let Some(cl) = &r.classification else {
        mismatch(out, "classify: no classification produced");
        return;
    };
    for (id, want) in &c.theorems {
        match cl.theorem(id) {
            None => mismatch(out, format!("classify: unknown theorem {id}")),
            Some(t) => {
                let got = theorem_verdict(t);
                if &got != want {
                    mismatch(out, format!("classify: {id} is {got}, expected {want}"));
                }
            }
        }
    }
    for (path, want) in &c.values {
        match classification_value(cl, path) {
            Some(got) if json_matches(want, &got) => {}
            got => mismatch(out, format!("classify: {path} = {got:?}, expected {want}")),
        }
    }
}

/// Runs every entry in parallel; results come back sorted by name.
pub fn run_all(entries: &[Entry], seed: u64) -> Vec<EntryResult> {
    let mut results: Vec<EntryResult> = entries.par_iter().map(|e| run_entry(e, seed)).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries_parse() {
        let entries = bundled();
        assert!(entries.len() >= 10);
        for e in &entries {
            let p: Result<ProblemSpec> = e.problem.parse();
            assert!(p.is_ok(), "{}: {:?}", e.name, p.err());
            let x: std::result::Result<Expectation, _> = toml::from_str(&e.expect);
            assert!(x.is_ok(), "{}: {:?}", e.name, x.err());
        }
    }

    #[test]
    fn value_paths() {
        assert!(json_matches(&toml::Value::Integer(-3), &serde_json::json!(-3)));
        assert!(!json_matches(&toml::Value::Integer(3), &serde_json::json!("3")));
        assert!(json_matches(&toml::Value::String("null".into()), &Value::Null));
    }
}
