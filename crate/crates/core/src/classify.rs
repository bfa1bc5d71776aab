//! Applies the fibration theorems to a verified map.
//!
//! Facts about the map (harmonicity, singular locus, zero set, degrees,
//! homogeneity, homothety, user assertions) are computed once into a
//! [`FactBase`]. Each theorem then reads only the facts it needs, so removing
//! a fact turns every conclusion that relied on it into `undetermined`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{differential, wedge_all, DiffForm};
use crate::harmonic::{harmonic_first_integral_map, horizontally_homothetic_sufficient, singular_ideal};
use crate::ideals::{buchberger, origin_is_only_zero, real_dimension};
use crate::local_degree::el_degree;
use crate::numeric::least_squares_root;
use crate::poly::{Homogeneity, Polynomial};
use crate::report::Status;
use crate::scalar::rat_int;
use crate::{Map, Poly, Rational};

/// User assertions accepted by `--assert` and the problem file.
pub const KNOWN_ASSERTIONS: [&str; 4] = [
    "horizontally_homothetic",
    "link_connected",
    "link_nonempty",
    "mp_simply_connected",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypStatus {
    Holds,
    Fails,
    Unknown,
    UserAsserted,
}

impl HypStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            HypStatus::Holds => "holds",
            HypStatus::Fails => "fails",
            HypStatus::Unknown => "unknown",
            HypStatus::UserAsserted => "user-asserted",
        }
    }

    fn from_bool(b: bool) -> HypStatus {
        if b {
            HypStatus::Holds
        } else {
            HypStatus::Fails
        }
    }

    fn satisfied(self) -> bool {
        matches!(self, HypStatus::Holds | HypStatus::UserAsserted)
    }
}

/// A computed fact and where it came from.
#[derive(Debug, Clone, Serialize)]
pub struct Fact<T> {
    pub value: T,
    pub provenance: String,
}

fn fact<T>(value: T, provenance: impl Into<String>) -> Option<Fact<T>> {
    Some(Fact {
        value,
        provenance: provenance.into(),
    })
}

/// Names of the removable facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKey {
    Harmonic,
    Homogeneity,
    Singular,
    ZeroSet,
    Degrees,
    Homothety,
    Assertions,
}

impl FactKey {
    pub const ALL: [FactKey; 7] = [
        FactKey::Harmonic,
        FactKey::Homogeneity,
        FactKey::Singular,
        FactKey::ZeroSet,
        FactKey::Degrees,
        FactKey::Homothety,
        FactKey::Assertions,
    ];
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularInfo {
    /// "minors" or "first partials".
    pub generators: &'static str,
    pub generator_count: usize,
    pub complex_dim: i64,
    pub real_upper: i64,
    pub real_lower: Option<i64>,
    pub lower_subspace: Vec<String>,
    pub isolated: HypStatus,
    pub origin_singular: bool,
}

impl SingularInfo {
    pub fn real_dim(&self) -> Option<i64> {
        (self.real_lower == Some(self.real_upper)).then_some(self.real_upper)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroSetInfo {
    /// Whether `V_F = {0}` near the origin.
    pub origin_only: HypStatus,
    pub evidence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub contains_origin: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentDegree {
    pub component: usize,
    pub degree: Option<i64>,
    pub local_milnor: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MilnorSetInfo {
    pub minors: usize,
    /// Every point is ρ-nonregular: all minors vanish identically.
    pub degenerate: bool,
    pub sampled_zero_points: usize,
    pub sampled_in_milnor_set: usize,
    pub accumulation_found: bool,
}

/// Everything the theorems may consult.
#[derive(Debug, Clone)]
pub struct FactBase {
    pub map_name: String,
    pub ambient: usize,
    pub p: usize,
    pub harmonic: Option<Fact<HypStatus>>,
    /// Common degree when every component is homogeneous of the same degree.
    pub homogeneity: Option<Fact<Option<u32>>>,
    pub singular: Option<Fact<SingularInfo>>,
    pub zero_set: Option<Fact<ZeroSetInfo>>,
    pub degrees: Option<Fact<Vec<ComponentDegree>>>,
    pub homothety: Option<Fact<Status>>,
    pub assertions: Option<Fact<BTreeSet<String>>>,
    pub milnor_set: Option<MilnorSetInfo>,
    /// Inconsistencies found while computing facts.
    pub alarms: Vec<String>,
}

impl FactBase {
    /// Computes every fact for `map`. `seed` drives all randomized steps.
    pub fn build(map: &Map, map_name: &str, assertions: &[String], seed: u64) -> Result<FactBase> {
        for a in assertions {
            if !KNOWN_ASSERTIONS.contains(&a.as_str()) {
                return Err(Error::Schema(format!(
                    "unknown assertion `{a}` (known: {})",
                    KNOWN_ASSERTIONS.join(", ")
                )));
            }
        }
        let mut alarms = Vec::new();
        let verdict = harmonic_first_integral_map(map)?;
        if let Some(a) = &verdict.alarm {
            alarms.push(a.clone());
        }
        let harmonic = fact(
            HypStatus::from_bool(verdict.holds()),
            "harmonic_first_integral_map check (Laplacians, Gram matrix, independence)",
        );

        let mut common = None;
        let mut uniform = true;
        for f in map.components() {
            match f.homogeneity() {
                Homogeneity::Degree(d) if common.is_none() || common == Some(d) => common = Some(d),
                _ => uniform = false,
            }
        }
        let homogeneity = fact(
            if uniform { common } else { None },
            "term-by-term homogeneity of each component",
        );

        let singular = fact(
            singular_info(map)?,
            "Krull dimension of the singular ideal with real refinement",
        );
        let zero_set = fact(
            zero_set_info(map)?,
            "Groebner basis of the components plus real certificates",
        );

        let mut per = Vec::new();
        for (k, f) in map.components().iter().enumerate() {
            per.push(component_degree(k + 1, f, seed, &mut alarms)?);
        }
        let degrees = fact(per, "Eisenbud-Levine signature of each gradient at the origin");

        let homothety = fact(
            horizontally_homothetic_sufficient(map).status,
            "sufficient test ⟨∇λ², ∇f_α⟩ ≡ 0",
        );
        let assertions = fact(assertions.iter().cloned().collect(), "user assertion");
        let milnor_set = Some(milnor_set_info(map, seed)?);

        Ok(FactBase {
            map_name: map_name.to_string(),
            ambient: map.arity(),
            p: map.len(),
            harmonic,
            homogeneity,
            singular,
            zero_set,
            degrees,
            homothety,
            assertions,
            milnor_set,
            alarms,
        })
    }

    /// The same base with one fact removed.
    pub fn without(&self, key: FactKey) -> FactBase {
        let mut out = self.clone();
        match key {
            FactKey::Harmonic => out.harmonic = None,
            FactKey::Homogeneity => out.homogeneity = None,
            FactKey::Singular => out.singular = None,
            FactKey::ZeroSet => out.zero_set = None,
            FactKey::Degrees => out.degrees = None,
            FactKey::Homothety => out.homothety = None,
            FactKey::Assertions => out.assertions = None,
        }
        out
    }

    fn asserted(&self, flag: &str) -> Option<bool> {
        self.assertions.as_ref().map(|a| a.value.contains(flag))
    }

    fn first_degree(&self) -> Option<i64> {
        self.degrees
            .as_ref()
            .and_then(|d| d.value.first().and_then(|c| c.degree))
    }

    /// Summary of the facts for the report.
    pub fn summary(&self) -> Value {
        json!({
            "map": self.map_name,
            "ambient_dimension": self.ambient,
            "components": self.p,
            "harmonic_first_integral_map": self.harmonic.as_ref().map(|f| f.value.as_str()),
            "common_homogeneous_degree": self.homogeneity.as_ref().map(|f| f.value),
            "singular_set": self.singular.as_ref().map(|f| &f.value),
            "zero_set": self.zero_set.as_ref().map(|f| &f.value),
            "gradient_degrees": self.degrees.as_ref().map(|f| &f.value),
            "homothety_sufficient_test": self.homothety.as_ref().map(|f| f.value.as_str()),
            "assertions": self.assertions.as_ref().map(|f| &f.value),
        })
    }
}

fn singular_info(map: &Map) -> Result<SingularInfo> {
    let s = singular_ideal(map)?;
    let (generators, gens) = match s.hwc_generators {
        // for hwc maps DF DFᵀ = λ² I, so rank drops exactly where all partials vanish
        Some(g) => ("first partials", g),
        None => ("minors", s.minors),
    };
    let ctx = map.context();
    let origin = vec![Rational::zero(); ctx.arity()];
    if gens.is_empty() {
        let n = ctx.arity() as i64;
        return Ok(SingularInfo {
            generators,
            generator_count: 0,
            complex_dim: n,
            real_upper: n,
            real_lower: Some(n),
            lower_subspace: ctx.names().to_vec(),
            isolated: HypStatus::Fails,
            origin_singular: true,
        });
    }
    let origin_singular = gens
        .iter()
        .all(|g| g.evaluate(&origin).map(|v| v.is_zero()).unwrap_or(false));
    let rd = real_dimension(&gens)?;
    let isolated = if rd.upper <= 0 {
        HypStatus::Holds
    } else if rd.lower.is_some_and(|l| l >= 1) {
        HypStatus::Fails
    } else {
        HypStatus::Unknown
    };
    Ok(SingularInfo {
        generators,
        generator_count: gens.len(),
        complex_dim: rd.complex_dim,
        real_upper: rd.upper,
        real_lower: rd.lower,
        lower_subspace: rd.subspace.iter().map(|&i| ctx.name(i).to_string()).collect(),
        isolated,
        origin_singular,
    })
}

fn point_text(map: &Map, pt: &[Rational]) -> String {
    let parts: Vec<String> = map
        .context()
        .names()
        .iter()
        .zip(pt)
        .filter(|(_, v)| !v.is_zero())
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    format!("({}; other coordinates 0)", parts.join(", "))
}

/// Decides whether the origin is the only real zero of `F` near 0.
fn zero_set_info(map: &Map) -> Result<ZeroSetInfo> {
    let ctx = map.context().clone();
    let n = ctx.arity();
    let origin = vec![Rational::zero(); n];
    let contains_origin = map.evaluate(&origin)?.iter().all(Zero::is_zero);
    let done = |origin_only, evidence: &str, witness| {
        Ok(ZeroSetInfo {
            origin_only,
            evidence: evidence.to_string(),
            witness,
            contains_origin,
        })
    };
    if !contains_origin {
        return done(HypStatus::Fails, "F(0) ≠ 0", None);
    }
    let comps = map.components();
    let gb = buchberger(comps)?;
    if origin_is_only_zero(&gb)? {
        return done(
            HypStatus::Holds,
            "every variable is nilpotent modulo the ideal of F",
            None,
        );
    }
    let rd = real_dimension(comps)?;
    if rd.upper <= 0 && origin_is_only_zero(&rd.refined)? {
        return done(
            HypStatus::Holds,
            "real refinement of the ideal of F makes every variable nilpotent",
            None,
        );
    }
    if let Some(l) = rd.lower.filter(|&l| l >= 1) {
        let mut pt = origin.clone();
        for &i in &rd.subspace {
            pt[i] = rat_int(1);
        }
        let _ = l;
        return done(
            HypStatus::Fails,
            "every component vanishes on a coordinate subspace",
            Some(point_text(map, &pt)),
        );
    }
    if let Some(pt) = grid_zero(map)? {
        return done(
            HypStatus::Fails,
            "nonzero integer point of the zero set",
            Some(point_text(map, &pt)),
        );
    }
    if let Some(w) = sign_change_certificate(map)? {
        return done(HypStatus::Fails, "sign change on a coordinate subspace", Some(w));
    }
    done(HypStatus::Unknown, "no certificate either way", None)
}

/// Searches `{-1,0,1}^n ∖ {0}` for a common zero; F homogeneous makes any hit
/// a zero arbitrarily close to the origin, otherwise hits are only reported
/// near the origin after scaling is checked by the caller's certificate.
fn grid_zero(map: &Map) -> Result<Option<Vec<Rational>>> {
    let n = map.arity();
    if n > 10
        || map
            .components()
            .iter()
            .any(|f| !matches!(f.homogeneity(), Homogeneity::Degree(_)))
    {
        return Ok(None);
    }
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let pt: Vec<Rational> = (0..n)
            .map(|_| {
                let v = (c % 3) as i64 - 1;
                c /= 3;
                rat_int(v)
            })
            .collect();
        if pt.iter().any(|v| !v.is_zero()) && map.evaluate(&pt)?.iter().all(Zero::is_zero) {
            return Ok(Some(pt));
        }
    }
    Ok(None)
}

/// A coordinate subspace of dimension ≥ 2 on which all components but one
/// vanish identically while the remaining one takes both signs. Its unit
/// sphere is connected, so that component has a zero there; homogeneity lets
/// the zero be scaled toward the origin.
fn sign_change_certificate(map: &Map) -> Result<Option<String>> {
    let ctx = map.context();
    let n = ctx.arity();
    if n > 16
        || map
            .components()
            .iter()
            .any(|f| !matches!(f.homogeneity(), Homogeneity::Degree(_)))
    {
        return Ok(None);
    }
    let mut masks: Vec<u32> = (1u32..(1 << n)).filter(|m| m.count_ones() >= 2).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for mask in masks {
        let zeroed: Vec<bool> = (0..n).map(|i| mask & (1 << i) == 0).collect();
        let restricted: Vec<Poly> = map.components().iter().map(|f| f.restrict_to_zero(&zeroed)).collect();
        let live: Vec<usize> = (0..restricted.len()).filter(|&k| !restricted[k].is_zero()).collect();
        if live.len() != 1 {
            continue;
        }
        let g = &restricted[live[0]];
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut pos = None;
        let mut neg = None;
        for &i in &support {
            let mut pt = vec![Rational::zero(); n];
            pt[i] = rat_int(1);
            let v = g.evaluate(&pt)?;
            if v.is_positive() && pos.is_none() {
                pos = Some((i, v));
            } else if v.is_negative() && neg.is_none() {
                neg = Some((i, v));
            }
        }
        if let (Some((pi, pv)), Some((ni, nv))) = (pos, neg) {
            let names: Vec<&str> = support.iter().map(|&i| ctx.name(i)).collect();
            let (pa, na) = (ctx.name(pi), ctx.name(ni));
            let k = live[0] + 1;
            let mut text = format!(
                "on span{{{}}} every component except f{k} vanishes identically; f{k} = {pv} at {pa}=1 and {nv} at {na}=1, so f{k} has a nonzero zero on the connected unit sphere of that span",
                names.join(", "),
            );
            // pv·s² + nv·t² vanishes at s = √(−nv), t = √pv
            let plane: Vec<bool> = (0..n).map(|i| i != pi && i != ni).collect();
            let diag = Poly::var(ctx, pi)? * Poly::var(ctx, pi)? * Poly::constant(ctx, pv.clone())
                + Poly::var(ctx, ni)? * Poly::var(ctx, ni)? * Poly::constant(ctx, nv.clone());
            if g.restrict_to_zero(&plane) == diag {
                text.push_str(&format!(
                    "; explicitly {pa}=√({}), {na}=√({pv}), other coordinates 0",
                    -nv
                ));
            }
            return Ok(Some(text));
        }
    }
    Ok(None)
}

fn component_degree(k: usize, f: &Poly, seed: u64, alarms: &mut Vec<String>) -> Result<ComponentDegree> {
    match el_degree(f, seed) {
        Ok(d) => {
            if let Some(c) = &d.certificate {
                if !c.functionals_agree() {
                    alarms.push(format!(
                        "f{k}: Eisenbud-Levine signatures disagree between functionals ({} vs {})",
                        c.signature(),
                        c.check_signature
                    ));
                }
            }
            Ok(ComponentDegree {
                component: k,
                degree: Some(d.degree),
                local_milnor: Some(d.local_milnor()),
                note: None,
            })
        }
        Err(Error::InfiniteMilnorNumber) => Ok(ComponentDegree {
            component: k,
            degree: None,
            local_milnor: None,
            note: Some("infinite Milnor number".into()),
        }),
        Err(Error::Unsupported(m)) => Ok(ComponentDegree {
            component: k,
            degree: None,
            local_milnor: None,
            note: Some(m),
        }),
        Err(e) => Err(e),
    }
}

/// `(p+1) x (p+1)` minors of the Jacobian of `(F, ρ)`.
pub fn milnor_set_minors(map: &Map) -> Result<Vec<Poly>> {
    let ctx = map.context();
    let mut rho = Polynomial::zero(ctx);
    for i in 0..ctx.arity() {
        let x = Polynomial::var(ctx, i)?;
        rho = &rho + &(&x * &x);
    }
    let mut forms: Vec<DiffForm<Rational>> = map.components().iter().map(differential).collect();
    forms.push(differential(&rho));
    if forms.len() > ctx.arity() {
        return Ok(Vec::new());
    }
    let refs: Vec<&DiffForm<Rational>> = forms.iter().collect();
    let w = wedge_all(&refs)?;
    Ok(w.terms().map(|(_, c)| c.clone()).collect())
}

const MILNOR_SAMPLES: usize = 24;

/// Sampling attempt to falsify that `M(F) ∖ V_F` accumulates only at the
/// origin on `V_F`: project random points onto `V_F` near the origin, keep
/// those lying in `M(F)`, and look for `M(F)` points off `V_F` nearby.
fn milnor_set_info(map: &Map, seed: u64) -> Result<MilnorSetInfo> {
    let minors = milnor_set_minors(map)?;
    let degenerate = minors.is_empty();
    let mut info = MilnorSetInfo {
        minors: minors.len(),
        degenerate,
        sampled_zero_points: 0,
        sampled_in_milnor_set: 0,
        accumulation_found: false,
    };
    let n = map.arity();
    if degenerate || n > 12 {
        return Ok(info);
    }
    let to_f = |p: &Poly| p.map_coefficients(crate::Scalar::to_f64);
    let ff: Vec<Polynomial<f64>> = map.components().iter().map(to_f).collect();
    let mf: Vec<Polynomial<f64>> = minors.iter().map(to_f).collect();
    let ctx = map.context();
    let homogeneous = map
        .components()
        .iter()
        .all(|f| matches!(f.homogeneity(), Homogeneity::Degree(_)));
    let r = if homogeneous { 1.0 } else { 0.25 };
    let mut rho = Polynomial::<f64>::constant(ctx, -r * r);
    for i in 0..n {
        let x = Polynomial::<f64>::var(ctx, i)?;
        rho = &rho + &(&x * &x);
    }
    let mut sys = ff.clone();
    sys.push(rho);
    let sys_jac: Vec<Vec<Polynomial<f64>>> = sys.iter().map(Polynomial::gradient).collect();
    let minor_jac: Vec<Vec<Polynomial<f64>>> = mf.iter().map(Polynomial::gradient).collect();
    let max_abs = |ps: &[Polynomial<f64>], x: &[f64]| {
        ps.iter()
            .map(|p| p.evaluate(x).expect("arity").abs())
            .fold(0.0f64, f64::max)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d49_4c4e);
    let unit = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let l = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if l > 0.2 {
                return v.iter().map(|a| a / l).collect();
            }
        }
    };
    // typical minor size on the sphere, for a relative threshold
    let typical = (0..16)
        .map(|_| {
            let u = unit(&mut rng);
            let x: Vec<f64> = u.iter().map(|a| a * r).collect();
            max_abs(&mf, &x)
        })
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let typical_f = (0..16)
        .map(|_| {
            let u = unit(&mut rng);
            let x: Vec<f64> = u.iter().map(|a| a * r).collect();
            max_abs(&ff, &x)
        })
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for _ in 0..MILNOR_SAMPLES {
        let u = unit(&mut rng);
        let x0: Vec<f64> = u.iter().map(|a| a * r).collect();
        let Some(x) = least_squares_root(&sys, &sys_jac, x0, 1e-11 * typical_f.max(1.0), 200) else {
            continue;
        };
        info.sampled_zero_points += 1;
        if max_abs(&mf, &x) > 1e-8 * typical {
            continue;
        }
        info.sampled_in_milnor_set += 1;
        let mut hits = 0;
        for delta in [r / 16.0, r / 256.0] {
            let found = (0..4).any(|_| {
                let d = unit(&mut rng);
                let y0: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + delta * b).collect();
                least_squares_root(&mf, &minor_jac, y0, 1e-12 * typical, 200).is_some_and(|y| {
                    let dist = y.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                    dist <= 2.0 * delta && max_abs(&ff, &y) > 1e-6 * typical_f * (delta / r)
                })
            });
            if found {
                hits += 1;
            }
        }
        if hits == 2 {
            info.accumulation_found = true;
        }
    }
    Ok(info)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Applies,
    FailsHypothesis(String),
    Undetermined,
}

impl Applicability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Applicability::Applies => "applies",
            Applicability::FailsHypothesis(_) => "fails_hypothesis",
            Applicability::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypStatus,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremApplication {
    pub id: String,
    pub hypotheses: Vec<Hypothesis>,
    pub applicability: Applicability,
    pub conclusions: Vec<String>,
    pub payload: Value,
    /// Facts whose removal affects this application.
    pub depends: Vec<FactKey>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub facts: Value,
    pub theorems: Vec<TheoremApplication>,
    pub notes: Vec<String>,
    pub alarms: Vec<String>,
}

impl ClassificationReport {
    pub fn theorem(&self, id: &str) -> Option<&TheoremApplication> {
        self.theorems.iter().find(|t| t.id == id)
    }
}

struct Builder {
    id: &'static str,
    hyps: Vec<Hypothesis>,
    depends: BTreeSet<FactKey>,
}

const MISSING: &str = "fact not available";

impl Builder {
    fn new(id: &'static str) -> Builder {
        Builder {
            id,
            hyps: Vec::new(),
            depends: BTreeSet::new(),
        }
    }

    fn hyp(&mut self, name: impl Into<String>, status: HypStatus, provenance: impl Into<String>) -> HypStatus {
        self.hyps.push(Hypothesis {
            name: name.into(),
            status,
            provenance: provenance.into(),
        });
        status
    }

    fn structural(&mut self, name: impl Into<String>, holds: bool) -> HypStatus {
        self.hyp(name, HypStatus::from_bool(holds), "input shape")
    }

    fn fact_hypothesis<T>(
        &mut self,
        name: impl Into<String>,
        key: FactKey,
        f: &Option<Fact<T>>,
        decide: impl FnOnce(&T) -> HypStatus,
    ) -> HypStatus {
        self.depends.insert(key);
        match f {
            Some(fact) => {
                let s = decide(&fact.value);
                self.hyp(name, s, fact.provenance.clone())
            }
            None => self.hyp(name, HypStatus::Unknown, MISSING),
        }
    }

    fn harmonic(&mut self, facts: &FactBase) -> HypStatus {
        self.fact_hypothesis(
            "F is a harmonic first integral map",
            FactKey::Harmonic,
            &facts.harmonic,
            |s| *s,
        )
    }

    fn isolated(&mut self, facts: &FactBase) -> HypStatus {
        self.fact_hypothesis(
            "isolated singularity at the origin (Sing F = {0})",
            FactKey::Singular,
            &facts.singular,
            |s| s.isolated,
        )
    }

    fn origin_singular(&mut self, facts: &FactBase) -> HypStatus {
        self.fact_hypothesis("dim Sing F ≥ 0", FactKey::Singular, &facts.singular, |s| {
            HypStatus::from_bool(s.origin_singular)
        })
    }

    fn applicability(&self) -> Applicability {
        if let Some(h) = self.hyps.iter().find(|h| h.status == HypStatus::Fails) {
            Applicability::FailsHypothesis(h.name.clone())
        } else if self.hyps.iter().all(|h| h.status.satisfied()) {
            Applicability::Applies
        } else {
            Applicability::Undetermined
        }
    }

    fn finish(self, conclusions: Vec<String>, payload: Value) -> TheoremApplication {
        let applicability = self.applicability();
        let conclusions = if applicability == Applicability::Applies {
            conclusions
        } else {
            Vec::new()
        };
        TheoremApplication {
            id: self.id.to_string(),
            hypotheses: self.hyps,
            applicability,
            conclusions,
            payload,
            depends: self.depends.into_iter().collect(),
        }
    }
}

/// Euler characteristic of the Milnor fiber when the degree theorem applies.
fn fiber_euler(facts: &FactBase) -> Option<i64> {
    let t = euler_characteristic(facts, &mut Vec::new());
    (t.applicability == Applicability::Applies)
        .then(|| t.payload["chi"].as_i64())
        .flatten()
}

fn fibrations(facts: &FactBase) -> Vec<TheoremApplication> {
    let p = facts.p;
    let truncations: Vec<usize> = (2..p).collect();
    let trunc_text = if truncations.is_empty() {
        String::new()
    } else {
        format!("; the same holds for the truncations F^j, j = {:?}", truncations)
    };
    let mut out = Vec::new();

    let mut b = Builder::new("milnor_tube_fibration");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("p ≥ 2", p >= 2);
    out.push(b.finish(
        vec![format!(
            "F admits a Milnor tube fibration B_ε ∩ F⁻¹(S^{}_η) → S^{}_η{trunc_text}",
            p - 1,
            p - 1
        )],
        json!({ "truncations": truncations }),
    ));

    let mut b = Builder::new("milnor_sphere_fibration");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("p ≥ 2", p >= 2);
    out.push(b.finish(
        vec![format!(
            "F/‖F‖ : S^{}_ε ∖ K_ε → S^{} is a locally trivial fibration{trunc_text}",
            facts.ambient - 1,
            p - 1
        )],
        json!({ "truncations": truncations }),
    ));

    let mut b = Builder::new("fibration_equivalence");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("p ≥ 2", p >= 2);
    out.push(b.finish(
        vec!["the tube and sphere fibrations are equivalent; the Milnor fiber is B_ε ∩ M_p".into()],
        json!({ "truncations": truncations }),
    ));
    out
}

fn milnor_set_condition(facts: &FactBase, alarms: &mut Vec<String>) -> TheoremApplication {
    let mut b = Builder::new("milnor_set_condition");
    let h = b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    let info = facts.milnor_set.clone();
    let falsified = info.as_ref().is_some_and(|i| i.accumulation_found);
    if falsified && h.satisfied() {
        alarms.push(format!(
            "{}: sampling found ρ-nonregular points off V_F accumulating on V_F ∖ {{0}}, contradicting the Milnor set condition",
            facts.map_name
        ));
    }
    let mut concl = vec!["the closure of M(F) ∖ V_F meets V_F only at the origin".to_string()];
    if facts.p == 1 {
        concl.push("for a single first integral this condition and Disc f = {0} hold automatically".into());
    }
    b.finish(concl, serde_json::to_value(&info).expect("serializes"))
}

fn euler_characteristic(facts: &FactBase, alarms: &mut Vec<String>) -> TheoremApplication {
    let mut b = Builder::new("euler_characteristic");
    let h = b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    let iso = b.isolated(facts);
    let even = facts.ambient.is_multiple_of(2);
    let degrees: Vec<Option<i64>> = facts
        .degrees
        .as_ref()
        .map(|d| d.value.iter().map(|c| c.degree).collect())
        .unwrap_or_default();
    let d1 = facts.first_degree();
    if even {
        b.fact_hypothesis("deg₀∇f₁ computed", FactKey::Degrees, &facts.degrees, |d| {
            if d.first().and_then(|c| c.degree).is_some() {
                HypStatus::Holds
            } else {
                HypStatus::Unknown
            }
        });
    }
    let hyps_hold = h.satisfied() && iso.satisfied();
    if hyps_hold {
        let known: Vec<i64> = degrees.iter().flatten().copied().collect();
        if even && known.windows(2).any(|w| w[0] != w[1]) {
            alarms.push(format!(
                "{}: gradient degrees differ between components ({:?}) although they must agree",
                facts.map_name, degrees
            ));
        }
        if !even && known.iter().any(|&d| d != 0) {
            alarms.push(format!(
                "{}: a gradient degree is nonzero ({:?}) in an odd-dimensional ambient space",
                facts.map_name, degrees
            ));
        }
    }
    let (chi, concl) = if even {
        match d1 {
            Some(d) => (
                Some(1 - d),
                vec![
                    format!("χ(M_p) = 1 − deg₀∇f₁ = {}", 1 - d),
                    "deg₀∇f_i is the same for every component".to_string(),
                ],
            ),
            None => (None, vec!["χ(M_p) = 1 − deg₀∇f₁ with degree undetermined".to_string()]),
        }
    } else {
        (
            Some(1),
            vec!["χ(M_p) = 1".to_string(), "deg₀∇f_i = 0 for every component".to_string()],
        )
    };
    let t = b.finish(
        concl,
        json!({
            "ambient_parity": if even { "n+1 even" } else { "n+1 odd" },
            "degrees": degrees,
            "chi": chi,
        }),
    );
    if t.applicability == Applicability::Applies {
        t
    } else {
        let mut t = t;
        t.payload["chi"] = Value::Null;
        t
    }
}

fn product_structure(facts: &FactBase) -> TheoremApplication {
    let mut b = Builder::new("product_structure");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.origin_singular(facts);
    let p = facts.p;
    b.finish(vec![format!("M_j ≅ M_p × B^{{p−j}} for j = 1..{p}")], json!({ "p": p }))
}

fn euler_equality(facts: &FactBase) -> TheoremApplication {
    let mut b = Builder::new("euler_equality");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("p ≥ 2", facts.p >= 2);
    b.origin_singular(facts);
    let chi = fiber_euler(facts);
    let mut concl = vec!["χ(M_j) = χ(N_j) = χ(N_j⁻) = χ(M_p) for every j".to_string()];
    if let Some(c) = chi {
        concl.push(format!("common value {c}"));
    }
    b.finish(concl, json!({ "chi": chi }))
}

fn link_euler_characteristic(facts: &FactBase) -> TheoremApplication {
    let mut b = Builder::new("link_euler_characteristic");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("p ≥ 2", facts.p >= 2);
    b.origin_singular(facts);
    // the fiber Euler characteristic needs the same facts as the degree theorem
    b.isolated(facts);
    let even = facts.ambient.is_multiple_of(2);
    if even {
        b.fact_hypothesis("deg₀∇f₁ computed", FactKey::Degrees, &facts.degrees, |d| {
            if d.first().and_then(|c| c.degree).is_some() {
                HypStatus::Holds
            } else {
                HypStatus::Unknown
            }
        });
    }
    let chi = fiber_euler(facts);
    let mut links = Vec::new();
    let mut concl = Vec::new();
    for j in 1..=facts.p {
        if j % 2 == 0 {
            links.push(json!({ "j": j, "chi": null, "note": "inapplicable: j even" }));
            continue;
        }
        let value = chi.map(|c| if even { 2 * c } else { 2 - 2 * c });
        if let Some(v) = value {
            concl.push(format!("χ(V_{{F^{j}}} ∩ S^{}_ε) = {v}", facts.ambient - 1));
        }
        links.push(json!({ "j": j, "chi": value }));
    }
    b.finish(concl, json!({ "links": links }))
}

fn ball_inclusion(facts: &FactBase) -> TheoremApplication {
    let mut b = Builder::new("ball_inclusion");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.isolated(facts);
    let n = facts.ambient - 1;
    let p = facts.p;
    let shape = (n + 1, p);
    let deg_zero = facts
        .degrees
        .as_ref()
        .map(|d| d.value.first().and_then(|c| c.degree).map(|v| v == 0));
    // Some(Some(b)) known, Some(None) not computable, None fact removed
    let deg_status = match deg_zero {
        Some(Some(true)) => HypStatus::Holds,
        Some(Some(false)) => HypStatus::Fails,
        _ => HypStatus::Unknown,
    };
    let flag = |name: &str| match facts.asserted(name) {
        Some(true) => HypStatus::UserAsserted,
        Some(false) => HypStatus::Unknown,
        None => HypStatus::Unknown,
    };
    let either = |a: HypStatus, c: HypStatus| {
        if a == HypStatus::Holds || c == HypStatus::Holds {
            HypStatus::Holds
        } else if a.satisfied() || c.satisfied() {
            HypStatus::UserAsserted
        } else if a == HypStatus::Fails && c == HypStatus::Fails {
            HypStatus::Fails
        } else {
            HypStatus::Unknown
        }
    };
    let gate = |cond: bool, s: HypStatus| if cond { s } else { HypStatus::Fails };
    let conditions = [
        (
            "(n+1,p) = (4,2) and deg₀∇f₁ = 0",
            gate(shape == (4, 2), deg_status),
            true,
            false,
        ),
        (
            "(n+1,p) = (5,2) and M_p simply connected",
            gate(shape == (5, 2), flag("mp_simply_connected")),
            false,
            true,
        ),
        (
            "(n+1,p) = (6,3) and (link connected or deg₀∇f₁ = 0)",
            gate(shape == (6, 3), either(deg_status, flag("link_connected"))),
            true,
            true,
        ),
        (
            "(n+1,p) = (8,5) and (link nonempty or deg₀∇f₁ = 0)",
            gate(shape == (8, 5), either(deg_status, flag("link_nonempty"))),
            true,
            true,
        ),
        (
            "p = n and (n+1,p) ≠ (4,3)",
            HypStatus::from_bool(p == n && shape != (4, 3)),
            false,
            false,
        ),
        (
            "n − p = 1 and (n+1,p) ≠ (4,2)",
            HypStatus::from_bool(n == p + 1 && shape != (4, 2)),
            false,
            false,
        ),
        (
            "n − p + 1 = 3 and (n+1,p) ∉ {(5,2),(6,3),(8,5)}",
            HypStatus::from_bool(n + 1 == p + 3 && ![(5, 2), (6, 3), (8, 5)].contains(&shape)),
            false,
            false,
        ),
    ];
    let mut overall = HypStatus::Fails;
    let mut listed = Vec::new();
    for (k, (text, status, uses_degree, uses_flag)) in conditions.iter().enumerate() {
        if *status != HypStatus::Fails {
            if *uses_degree {
                b.depends.insert(FactKey::Degrees);
            }
            if *uses_flag {
                b.depends.insert(FactKey::Assertions);
            }
        }
        overall = match (overall, *status) {
            (HypStatus::Holds, _) | (_, HypStatus::Holds) => HypStatus::Holds,
            (HypStatus::UserAsserted, _) | (_, HypStatus::UserAsserted) => HypStatus::UserAsserted,
            (HypStatus::Unknown, _) | (_, HypStatus::Unknown) => HypStatus::Unknown,
            _ => HypStatus::Fails,
        };
        listed.push(json!({ "condition": k + 1, "text": text, "status": status.as_str() }));
    }
    b.hyp(
        "one of the seven dimension conditions",
        overall,
        "dimension arithmetic, degrees and assertions",
    );
    b.finish(
        vec![format!(
            "each level set of F^j lies in B^{} × B^{{p−j}} up to homeomorphism, j = 1..{p}",
            (n + 1).saturating_sub(p)
        )],
        json!({ "conditions": listed }),
    )
}

fn hopf_fiber_inclusion(facts: &FactBase, alarms: &mut Vec<String>) -> TheoremApplication {
    let mut b = Builder::new("hopf_fiber_inclusion");
    let h = b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    let d = facts.homogeneity.as_ref().and_then(|f| f.value);
    let hom = b.fact_hypothesis(
        "components homogeneous of a common degree d",
        FactKey::Homogeneity,
        &facts.homogeneity,
        |v| HypStatus::from_bool(v.is_some()),
    );
    b.structural("p ≥ 3", facts.p >= 3);
    let vf = b.fact_hypothesis("V_F = {0}", FactKey::ZeroSet, &facts.zero_set, |z| z.origin_only);
    let n = facts.ambient - 1;
    let triple = (n, facts.p, d.unwrap_or(0));
    let allowed = [(3, 3, 2), (7, 5, 2), (15, 9, 2)];
    let in_list = allowed.contains(&triple);
    if h.satisfied() && hom.satisfied() && facts.p >= 3 && vf.satisfied() && !in_list {
        alarms.push(format!(
            "{}: (n, p, d) = {:?} is outside the admissible list {:?}",
            facts.map_name, triple, allowed
        ));
    }
    let witness = facts.zero_set.as_ref().and_then(|z| z.value.witness.clone());
    b.finish(
        vec![
            format!(
                "each level set of Ψ_F lies in a fiber of the Hopf fibration S^{n} → S^{}",
                facts.p - 1
            ),
            format!("(n, p, d) = {:?} is one of {:?}", triple, allowed),
        ],
        json!({ "n": n, "p": facts.p, "d": d, "zero_set_witness": witness }),
    )
}

fn quadratic_pencil(facts: &FactBase, alarms: &mut Vec<String>) -> TheoremApplication {
    let mut b = Builder::new("quadratic_pencil");
    let h = b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.structural("ambient dimension even", facts.ambient.is_multiple_of(2));
    b.structural("p = 2", facts.p == 2);
    b.fact_hypothesis(
        "components homogeneous of degree 2",
        FactKey::Homogeneity,
        &facts.homogeneity,
        |v| HypStatus::from_bool(*v == Some(2)),
    );
    b.fact_hypothesis("dim V_F ≥ 0", FactKey::ZeroSet, &facts.zero_set, |z| {
        HypStatus::from_bool(z.contains_origin)
    });
    let m = facts.ambient / 2;
    let t = b.finish(
        vec![
            "Sing F = {0}".to_string(),
            format!("Ψ_F is equivalent to Ψ_f for f = λ₁z₁² + … + λ_{m}z_{m}², λ_k ≥ 0 not all zero"),
            format!(
                "the Milnor fiber is homotopy equivalent to S^{} (μ = 1)",
                m.saturating_sub(1)
            ),
            format!("level sets lie in S^{} up to isometry", m.saturating_sub(1)),
        ],
        json!({ "complex_dimension": m, "fiber_sphere_dimension": m.saturating_sub(1), "milnor_number": 1 }),
    );
    if t.applicability == Applicability::Applies
        && h.satisfied()
        && facts
            .singular
            .as_ref()
            .is_some_and(|s| s.value.isolated == HypStatus::Fails)
    {
        alarms.push(format!(
            "{}: the singular set is positive-dimensional although it must be the origin",
            facts.map_name
        ));
    }
    t
}

fn minimal_fibers(facts: &FactBase) -> TheoremApplication {
    let mut b = Builder::new("minimal_fibers");
    b.harmonic(facts);
    b.structural("p ≤ n", facts.p < facts.ambient);
    b.fact_hypothesis(
        "components homogeneous of a common degree",
        FactKey::Homogeneity,
        &facts.homogeneity,
        |v| HypStatus::from_bool(v.is_some()),
    );
    b.fact_hypothesis("dim V_F ≥ 0", FactKey::ZeroSet, &facts.zero_set, |z| {
        HypStatus::from_bool(z.contains_origin)
    });
    let p = facts.p;
    let cond = if p == 3 {
        b.hyp(
            "p = 3, or p ≥ 4 with Ψ_F horizontally homothetic",
            HypStatus::Holds,
            "input shape",
        )
    } else if p >= 4 {
        b.depends.insert(FactKey::Homothety);
        b.depends.insert(FactKey::Assertions);
        let test = facts.homothety.as_ref().map(|f| f.value);
        let (status, prov) = if test == Some(Status::Holds) {
            (HypStatus::Holds, "sufficient test ⟨∇λ², ∇f_α⟩ ≡ 0")
        } else if facts.asserted("horizontally_homothetic") == Some(true) {
            (HypStatus::UserAsserted, "user assertion")
        } else if test.is_none() {
            (HypStatus::Unknown, MISSING)
        } else {
            (HypStatus::Unknown, "sufficient test inconclusive and no assertion")
        };
        b.hyp("p = 3, or p ≥ 4 with Ψ_F horizontally homothetic", status, prov)
    } else {
        b.hyp(
            "p = 3, or p ≥ 4 with Ψ_F horizontally homothetic",
            HypStatus::Unknown,
            "no condition matches p ≤ 2",
        )
    };
    let _ = cond;
    b.finish(
        vec!["the fibers of Ψ_F are minimal submanifolds of the sphere".into()],
        json!({ "p": p }),
    )
}

/// Runs every theorem against the facts, in dependency order.
pub fn classify(facts: &FactBase) -> ClassificationReport {
    let mut alarms = facts.alarms.clone();
    let mut theorems = fibrations(facts);
    theorems.push(milnor_set_condition(facts, &mut alarms));
    theorems.push(euler_characteristic(facts, &mut alarms));
    theorems.push(product_structure(facts));
    theorems.push(euler_equality(facts));
    theorems.push(link_euler_characteristic(facts));
    theorems.push(ball_inclusion(facts));
    theorems.push(hopf_fiber_inclusion(facts, &mut alarms));
    theorems.push(quadratic_pencil(facts, &mut alarms));
    theorems.push(minimal_fibers(facts));

    let mut notes = Vec::new();
    if facts.p == 1 {
        notes.push("a single first integral: the fibration theorems need p ≥ 2".into());
    }
    if let Some(s) = &facts.singular {
        if let Some(d) = s.value.real_dim() {
            notes.push(format!("real dimension of Sing F is {d}"));
        } else {
            notes.push(format!(
                "real dimension of Sing F lies in [{}, {}]",
                s.value.real_lower.map_or("?".to_string(), |l| l.to_string()),
                s.value.real_upper
            ));
        }
    }
    if let Some(a) = &facts.assertions {
        for flag in &a.value {
            notes.push(format!("user-asserted: {flag}"));
        }
    }
    ClassificationReport {
        facts: facts.summary(),
        theorems,
        notes,
        alarms,
    }
}
