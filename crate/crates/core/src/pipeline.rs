//! The three commands as library calls: `verify`, `degree`, `classify`.
//! Each turns a problem and a run configuration into a [`Report`].

use serde_json::{json, Map as JsonMap, Value};

use crate::classify::{classify as run_theorems, FactBase};
use crate::error::{Error, Result};
use crate::exterior::{
    differential, first_integral_check, frobenius_check, involutivity_check, wedge_all, DiffForm,
    INVOLUTIVITY_CRITERION,
};
use crate::harmonic::{
    functional_independence, gram, harmonic_first_integral_map, horizontally_homothetic_sufficient, laplacian,
    one_form_harmonic, HOMOTHETY_CRITERION,
};
use crate::ideals::{milnor_number, MilnorNumber};
use crate::local_degree::{el_degree, gradient_oracles};
use crate::poly::VariableContext;
use crate::problem::ProblemSpec;
use crate::report::{Check, Report, RunConfig, Status};
use crate::{Form, Rational};

/// Check families accepted by `--checks`.
pub const CHECK_FAMILIES: [&str; 10] = [
    "first_integral",
    "frobenius",
    "involutivity",
    "harmonic_form",
    "form_first_integral",
    "independence",
    "laplacian",
    "hwc",
    "harmonic_first_integral_map",
    "homothety",
];

/// Families run when none are requested. The homothety test is only
/// sufficient, so its `unknown` outcome is opt-in.
pub fn default_families() -> Vec<&'static str> {
    CHECK_FAMILIES.iter().copied().filter(|f| *f != "homothety").collect()
}

pub fn select_families(requested: &[String]) -> Result<Vec<&'static str>> {
    if requested.is_empty() {
        return Ok(default_families());
    }
    let mut out = Vec::new();
    for r in requested {
        let f = CHECK_FAMILIES.iter().find(|f| **f == r.as_str()).ok_or_else(|| {
            Error::Schema(format!(
                "unknown check family `{r}` (known: {})",
                CHECK_FAMILIES.join(", ")
            ))
        })?;
        if !out.contains(f) {
            out.push(*f);
        }
    }
    Ok(out)
}

fn blade(ctx: &VariableContext, idx: &[usize], prefix: &str) -> String {
    idx.iter()
        .map(|&i| format!("{prefix}{}", ctx.name(i)))
        .collect::<Vec<_>>()
        .join("^")
}

fn form_lines(label: &str, w: &DiffForm<Rational>) -> Vec<String> {
    let ctx = w.context().clone();
    w.terms()
        .map(|(idx, c)| {
            if idx.is_empty() {
                format!("{label} = {c}")
            } else {
                format!("{label}: {} = {c}", blade(&ctx, idx, "d"))
            }
        })
        .collect()
}

fn status_check(name: String, witness: Vec<String>) -> Check {
    if witness.is_empty() {
        Check::holds(name)
    } else {
        Check::fails(name, witness)
    }
}

/// Runs the selected checks on every object in the problem.
pub fn verify(problem: &ProblemSpec, config: RunConfig) -> Result<Report> {
    let families = select_families(&config.checks)?;
    let on = |f: &str| families.contains(&f);
    let mut report = Report::new(problem.digest.clone(), config);
    let fields: Vec<_> = problem.vector_fields.values().cloned().collect();
    let field_names: Vec<&String> = problem.vector_fields.keys().collect();
    let forms: Vec<Form> = problem.forms.values().cloned().collect();
    let form_names: Vec<&String> = problem.forms.keys().collect();

    for (mname, map) in &problem.maps {
        if on("first_integral") {
            for (xname, x) in &problem.vector_fields {
                let m = first_integral_check(map, std::slice::from_ref(x))?;
                let witness = m
                    .failures()
                    .map(|(k, _, r)| format!("df{}({xname}) = {r}", k + 1))
                    .collect();
                report
                    .checks
                    .push(status_check(format!("first_integral:{mname}:{xname}"), witness));
            }
        }
    }

    if !forms.is_empty() && on("frobenius") {
        let res = frobenius_check(&forms)?;
        let witness = res
            .iter()
            .flat_map(|r| form_lines(form_names[r.index], &r.residual))
            .collect();
        report.checks.push(status_check("frobenius".into(), witness));
        if forms.len() > 1 {
            for (name, w) in problem.forms.iter() {
                let r = frobenius_check(std::slice::from_ref(w))?;
                let witness = form_lines(&format!("d{name}^{name}"), &r[0].residual);
                report
                    .checks
                    .push(status_check(format!("frobenius_single:{name}"), witness));
            }
        }
    }

    if !fields.is_empty() && on("involutivity") {
        let inv = involutivity_check(&fields)?;
        let check = match &inv.first_failure {
            None => Check::holds("involutivity"),
            Some((i, j, mv)) => {
                let ctx = problem.context.clone();
                let witness = mv
                    .terms()
                    .map(|(idx, c)| {
                        format!(
                            "[{},{}]^span: {} = {c}",
                            field_names[*i],
                            field_names[*j],
                            blade(&ctx, idx, "∂")
                        )
                    })
                    .collect();
                Check::fails("involutivity", witness)
            }
        };
        report.checks.push(check.note(INVOLUTIVITY_CRITERION));
    }

    if on("harmonic_form") {
        for (name, w) in &problem.forms {
            let h = one_form_harmonic(w)?;
            let mut witness = form_lines(&format!("d{name}"), &h.d_residual);
            if !h.divergence.is_zero() {
                witness.push(format!("div {name} = {}", h.divergence));
            }
            report
                .checks
                .push(status_check(format!("harmonic_form:{name}"), witness));
        }
    }

    if !forms.is_empty() && on("form_first_integral") {
        let span_refs: Vec<&Form> = forms.iter().collect();
        let span = wedge_all(&span_refs)?;
        for (mname, map) in &problem.maps {
            let mut witness = Vec::new();
            for (k, f) in map.components().iter().enumerate() {
                let r = differential(f).wedge(&span)?;
                witness.extend(form_lines(
                    &format!(
                        "df{}^{}",
                        k + 1,
                        form_names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("^")
                    ),
                    &r,
                ));
            }
            report
                .checks
                .push(status_check(format!("form_first_integral:{mname}"), witness));
        }
    }

    for (mname, map) in &problem.maps {
        if on("independence") {
            let ind = functional_independence(map)?;
            let check = if ind.holds() {
                let (idx, c) = ind.witness().expect("nonzero wedge");
                Check::holds(format!("independence:{mname}"))
                    .note(format!("nonzero minor {} = {c}", blade(&problem.context, &idx, "d")))
            } else {
                let label = (1..=map.len()).map(|k| format!("df{k}")).collect::<Vec<_>>().join("^");
                Check::fails(format!("independence:{mname}"), vec![format!("{label} = 0")])
            };
            report.checks.push(check);
        }
        if on("laplacian") {
            let witness = map
                .components()
                .iter()
                .enumerate()
                .filter_map(|(k, f)| {
                    let l = laplacian(f);
                    (!l.is_zero()).then(|| format!("Δf{} = {l}", k + 1))
                })
                .collect();
            report.checks.push(status_check(format!("laplacian:{mname}"), witness));
        }
        if on("hwc") {
            let g = gram(map);
            let mut witness: Vec<String> = g
                .nonzero_off_diagonal()
                .into_iter()
                .map(|(a, b, v)| format!("<∇f{},∇f{}> = {v}", a + 1, b + 1))
                .collect();
            witness.extend(
                g.diagonal_defects()
                    .into_iter()
                    .map(|(a, d)| format!("|∇f{}|^2 - |∇f1|^2 = {d}", a + 1)),
            );
            let mut check = status_check(format!("hwc:{mname}"), witness);
            if let Some(l) = &g.lambda_sq {
                check = check.note(format!("λ² = {l}"));
            }
            report.checks.push(check);
        }
        if on("harmonic_first_integral_map") {
            let v = harmonic_first_integral_map(map)?;
            if let Some(a) = &v.alarm {
                report.alarms.push(format!("{mname}: {a}"));
            }
            let mut failed = Vec::new();
            if !v.laplacians_vanish() {
                failed.push("failed = laplacian".to_string());
            }
            if !v.gram.hwc {
                failed.push("failed = hwc".to_string());
            }
            if !v.independence.holds() {
                failed.push("failed = independence".to_string());
            }
            report
                .checks
                .push(status_check(format!("harmonic_first_integral_map:{mname}"), failed));
        }
        if on("homothety") {
            let t = horizontally_homothetic_sufficient(map);
            let witness = if t.status == Status::Unknown {
                t.residuals
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(k, r)| format!("<∇λ²,∇f{}> = {r}", k + 1))
                    .collect()
            } else {
                Vec::new()
            };
            report.checks.push(
                Check::with_status(format!("homothety_sufficient:{mname}"), t.status, witness)
                    .note(HOMOTHETY_CRITERION),
            );
        }
    }
    Ok(report)
}

fn functional_json(q: &crate::Quotient, phi: &[Rational]) -> Value {
    let ctx = q.groebner_basis().context().clone();
    let mut m = JsonMap::new();
    for (mono, v) in q.basis().iter().zip(phi) {
        if !num_traits::Zero::is_zero(v) {
            m.insert(mono.format_with(&ctx), Value::String(v.to_string()));
        }
    }
    Value::Object(m)
}

/// Milnor number and local degree of one gradient, with certificate and
/// numerical cross-checks.
pub fn degree(problem: &ProblemSpec, config: RunConfig) -> Result<Report> {
    let (mname, map) = problem.map(config.map.as_deref())?;
    let k = config.component.unwrap_or(1);
    let f = map.component(k)?.clone();
    let seed = config.seed;
    let mut report = Report::new(problem.digest.clone(), config);
    let mu = milnor_number(&f)?;
    let mut out = json!({
        "map": mname,
        "component": k,
        "polynomial": f.to_string(),
        "milnor_number": mu.to_string(),
    });
    match el_degree(&f, seed) {
        Ok(d) => {
            out["status"] = json!("computed");
            out["degree"] = json!(d.degree);
            out["local_milnor"] = json!(d.local_milnor());
            if let Some(c) = &d.certificate {
                let ctx = c.quotient.groebner_basis().context().clone();
                out["certificate"] = json!({
                    "local_basis": c.quotient.basis().iter().map(|m| m.format_with(&ctx)).collect::<Vec<_>>(),
                    "hessian_residue": c.hessian_residue.to_string(),
                    "functional": functional_json(&c.quotient, &c.functional),
                    "inertia": { "positive": c.inertia.positive, "negative": c.inertia.negative, "zero": c.inertia.zero },
                    "signature": c.signature(),
                    "check_signature": c.check_signature,
                    "functionals_agree": c.functionals_agree(),
                });
                if !c.functionals_agree() {
                    report.alarms.push(format!(
                        "Eisenbud-Levine signature depends on the functional ({} vs {})",
                        c.signature(),
                        c.check_signature
                    ));
                }
            } else {
                out["note"] = json!("∇f does not vanish at the origin");
            }
            let o = gradient_oracles(&f, seed)?;
            let values: Vec<i64> = o.winding_value().into_iter().chain(o.preimage_value()).collect();
            let agreement = if values.is_empty() {
                "no evidence"
            } else if values.iter().all(|v| *v == d.degree) {
                "agree"
            } else {
                "disagree"
            };
            if agreement == "disagree" {
                report.alarms.push(format!(
                    "numerical degree {:?} disagrees with the exact degree {}",
                    values, d.degree
                ));
            }
            out["oracles"] = json!({
                "radius": o.radius,
                "target_norm": o.target_norm,
                "retried": o.retried,
                "winding": match &o.winding {
                    None => Value::Null,
                    Some(Ok(v)) => json!(v),
                    Some(Err(e)) => json!(e.to_string()),
                },
                "preimage": match &o.preimage {
                    Ok(p) => json!(p.degree),
                    Err(e) => json!(e.to_string()),
                },
                "preimage_solutions": o.preimage.as_ref().map(|p| p.solutions.len()).unwrap_or(0),
                "agreement": agreement,
            });
        }
        Err(Error::InfiniteMilnorNumber) => {
            out["status"] = json!("infinite Milnor number");
            out["degree"] = Value::Null;
            out["note"] = json!("degree undefined by EL");
        }
        Err(Error::Unsupported(m)) => {
            out["status"] = json!("unsupported");
            out["degree"] = Value::Null;
            out["note"] = json!(m);
        }
        Err(Error::Inconsistency(m)) => {
            out["status"] = json!("inconsistent");
            out["degree"] = Value::Null;
            report.alarms.push(m);
        }
        Err(e) => return Err(e),
    }
    if mu == MilnorNumber::Infinite && out["status"] == json!("computed") && out["degree"] != json!(0) {
        out["note"] = json!("global Milnor number infinite; local algebra finite at the origin");
    }
    report.degree = Some(out);
    Ok(report)
}

/// Facts plus every theorem application for one map.
pub fn classify(problem: &ProblemSpec, config: RunConfig) -> Result<Report> {
    let (mname, map) = problem.map(config.map.as_deref())?;
    let mut assertions = problem.assertions.clone();
    for a in &config.assertions {
        if !assertions.contains(a) {
            assertions.push(a.clone());
        }
    }
    let facts = FactBase::build(map, mname, &assertions, config.seed)?;
    let cl = run_theorems(&facts);
    let mut report = Report::new(problem.digest.clone(), config);
    report.alarms = cl.alarms.clone();
    report.classification = Some(cl);
    Ok(report)
}

/// Dispatches on `config.command`.
pub fn run(problem: &ProblemSpec, config: RunConfig) -> Result<Report> {
    match config.command.as_str() {
        "verify" => verify(problem, config),
        "degree" => degree(problem, config),
        "classify" => classify(problem, config),
        other => Err(Error::Schema(format!("unknown command `{other}`"))),
    }
}
