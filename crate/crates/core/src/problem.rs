//! Problem files: a TOML document naming the variables and the maps,
//! vector fields and 1-forms built from them.
//!
//! ```toml
//! variables = ["x", "y", "z", "w"]
//! assertions = []
//!
//! [maps]
//! F = ["x^2 + y^2 - z^2 - w^2", "2*x*z + 2*y*w"]
//!
//! [vector_fields]
//! X = ["0", "z", "-y", "0"]
//!
//! [one_forms]
//! w1 = ["2*x", "2*y", "-2*z", "-2*w"]
//! ```

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::classify::KNOWN_ASSERTIONS;
use crate::error::{Error, Result};
use crate::exterior::{DiffForm, VectorField};
use crate::map::PolyMap;
use crate::parse::parse_polynomial;
use crate::poly::VariableContext;
use crate::{Field, Form, Map, Poly};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    variables: Vec<String>,
    #[serde(default)]
    assertions: Vec<String>,
    #[serde(default)]
    maps: IndexMap<String, Vec<String>>,
    #[serde(default)]
    vector_fields: IndexMap<String, Vec<String>>,
    #[serde(default)]
    one_forms: IndexMap<String, Vec<String>>,
}

/// A fully resolved problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub context: Arc<VariableContext>,
    pub maps: IndexMap<String, Map>,
    pub vector_fields: IndexMap<String, Field>,
    pub forms: IndexMap<String, Form>,
    pub assertions: Vec<String>,
    /// `sha256:` digest of the source text.
    pub digest: String,
}

impl ProblemSpec {
    /// The named map, or the first one.
    pub fn map(&self, name: Option<&str>) -> Result<(&str, &Map)> {
        match name {
            Some(n) => self
                .maps
                .get_key_value(n)
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| Error::NoSuchMap(n.to_string())),
            None => self
                .maps
                .first()
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| Error::Schema("problem declares no maps".into())),
        }
    }
}

pub fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

fn parse_list(items: &[String], ctx: &Arc<VariableContext>, object: &str) -> Result<Vec<Poly>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_polynomial(s, ctx).map_err(|e| e.in_object(format!("{object}[{}]", i + 1))))
        .collect()
}

fn per_variable(items: &[String], ctx: &Arc<VariableContext>, object: String) -> Result<Vec<Poly>> {
    if items.len() != ctx.arity() {
        return Err(Error::ArityMismatch {
            object,
            expected: ctx.arity(),
            got: items.len(),
        });
    }
    parse_list(items, ctx, &object)
}

impl std::str::FromStr for ProblemSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<ProblemSpec> {
        let raw: RawProblem = toml::from_str(text).map_err(|e| Error::Schema(e.message().to_string()))?;
        let ctx = VariableContext::new(raw.variables.iter().map(String::as_str))?;
        for a in &raw.assertions {
            if !KNOWN_ASSERTIONS.contains(&a.as_str()) {
                return Err(Error::Schema(format!(
                    "unknown assertion `{a}` (known: {})",
                    KNOWN_ASSERTIONS.join(", ")
                )));
            }
        }
        let mut maps = IndexMap::new();
        for (name, comps) in &raw.maps {
            if comps.is_empty() {
                return Err(Error::Schema(format!("map `{name}` has no components")));
            }
            let polys = parse_list(comps, &ctx, &format!("maps.{name}"))?;
            maps.insert(name.clone(), PolyMap::new(polys)?);
        }
        let mut vector_fields = IndexMap::new();
        for (name, comps) in &raw.vector_fields {
            let polys = per_variable(comps, &ctx, format!("vector_fields.{name}"))?;
            vector_fields.insert(name.clone(), VectorField::new(polys)?);
        }
        let mut forms = IndexMap::new();
        for (name, comps) in &raw.one_forms {
            let polys = per_variable(comps, &ctx, format!("one_forms.{name}"))?;
            forms.insert(name.clone(), DiffForm::one_form(polys)?);
        }
        Ok(ProblemSpec {
            context: ctx,
            maps,
            vector_fields,
            forms,
            assertions: raw.assertions,
            digest: digest(text),
        })
    }
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<ProblemSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = r#"
variables = ["x", "y", "z", "w"]
[maps]
F = ["x^2 + y^2 - z^2 - w^2", "2*x*z + 2*y*w"]
"#;

    #[test]
    fn loads_hopf() {
        let p: ProblemSpec = HOPF.parse().unwrap();
        assert_eq!(p.maps.len(), 1);
        assert_eq!(p.map(None).unwrap().1.len(), 2);
        assert!(p.digest.starts_with("sha256:"));
    }

    #[test]
    fn dangling_variable() {
        let text = "variables = [\"x\", \"y\"]\n[vector_fields]\nX = [\"v\", \"0\"]\n";
        let err = text.parse::<ProblemSpec>().unwrap_err();
        assert!(err.to_string().contains("unknown identifier `v`"), "{err}");
    }

    #[test]
    fn arity_and_unknown_keys() {
        let text = "variables = [\"x\", \"y\"]\n[one_forms]\nw = [\"x\"]\n";
        assert!(matches!(text.parse::<ProblemSpec>(), Err(Error::ArityMismatch { .. })));
        let text = "variables = [\"x\"]\nasertions = []\n";
        assert!(matches!(text.parse::<ProblemSpec>(), Err(Error::Schema(_))));
        let text = "variables = [\"x\"]\nassertions = [\"bogus\"]\n";
        assert!(matches!(text.parse::<ProblemSpec>(), Err(Error::Schema(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_problem("/nonexistent/x.prob"), Err(Error::Io { .. })));
    }
}
