//! Harmonicity, horizontal weak conformality and functional independence
//! of polynomial maps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{differential, wedge_all, DiffForm};
use crate::map::PolyMap;
use crate::poly::Polynomial;
use crate::report::Status;
use crate::scalar::Scalar;

/// `Σ_i ∂²f/∂x_i²`.
pub fn laplacian<K: Scalar>(f: &Polynomial<K>) -> Polynomial<K> {
    (0..f.arity()).fold(Polynomial::zero(f.context()), |acc, i| &acc + &f.d(i).d(i))
}

/// Euclidean inner product of two gradients.
pub fn gradient_dot<K: Scalar>(f: &Polynomial<K>, g: &Polynomial<K>) -> Polynomial<K> {
    (0..f.arity()).fold(Polynomial::zero(f.context()), |acc, i| &acc + &(&f.d(i) * &g.d(i)))
}

/// Closedness and co-closedness residuals of a 1-form.
#[derive(Debug, Clone)]
pub struct OneFormHarmonicity<K: Scalar> {
    pub d_residual: DiffForm<K>,
    pub divergence: Polynomial<K>,
}

impl<K: Scalar> OneFormHarmonicity<K> {
    pub fn holds(&self) -> bool {
        self.d_residual.is_zero() && self.divergence.is_zero()
    }
}

pub fn one_form_harmonic<K: Scalar>(w: &DiffForm<K>) -> Result<OneFormHarmonicity<K>> {
    let coeffs = w.one_form_coefficients()?;
    let divergence = coeffs
        .iter()
        .enumerate()
        .fold(Polynomial::zero(w.context()), |acc, (i, a)| &acc + &a.d(i));
    Ok(OneFormHarmonicity {
        d_residual: w.exterior_derivative(),
        divergence,
    })
}

#[derive(Debug, Clone)]
pub struct GramResult<K: Scalar> {
    pub gram: Vec<Vec<Polynomial<K>>>,
    pub lambda_sq: Option<Polynomial<K>>,
    pub hwc: bool,
}

impl<K: Scalar> GramResult<K> {
    /// Off-diagonal entries that are not identically zero, 0-based.
    pub fn nonzero_off_diagonal(&self) -> Vec<(usize, usize, &Polynomial<K>)> {
        let mut out = Vec::new();
        for (a, row) in self.gram.iter().enumerate() {
            for (b, g) in row.iter().enumerate().skip(a + 1) {
                if !g.is_zero() {
                    out.push((a, b, g));
                }
            }
        }
        out
    }

    /// Differences `g_aa - g_11` that are nonzero.
    pub fn diagonal_defects(&self) -> Vec<(usize, Polynomial<K>)> {
        let first = &self.gram[0][0];
        (1..self.gram.len())
            .filter_map(|a| {
                let diff = &self.gram[a][a] - first;
                (!diff.is_zero()).then_some((a, diff))
            })
            .collect()
    }
}

pub fn gram<K: Scalar>(map: &PolyMap<K>) -> GramResult<K> {
    let p = map.len();
    let grads = map.jacobian();
    let dot = |a: usize, b: usize| {
        grads[a]
            .iter()
            .zip(&grads[b])
            .fold(Polynomial::zero(map.context()), |acc, (x, y)| &acc + &(x * y))
    };
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|a| (a..p).map(move |b| (a, b))).collect();
    let upper: Vec<Polynomial<K>> = pairs.par_iter().map(|&(a, b)| dot(a, b)).collect();
    let mut gram = vec![vec![Polynomial::zero(map.context()); p]; p];
    for (&(a, b), g) in pairs.iter().zip(upper) {
        gram[b][a] = g.clone();
        gram[a][b] = g;
    }
    let off_zero = (0..p).all(|a| (a + 1..p).all(|b| gram[a][b].is_zero()));
    let diag_equal = (1..p).all(|a| gram[a][a] == gram[0][0]);
    let hwc = off_zero && diag_equal;
    GramResult {
        lambda_sq: hwc.then(|| gram[0][0].clone()),
        gram,
        hwc,
    }
}

#[derive(Debug, Clone)]
pub struct Independence<K: Scalar> {
    /// `df_1 ∧ ... ∧ df_p`; `None` when `p` exceeds the arity.
    pub wedge: Option<DiffForm<K>>,
}

impl<K: Scalar> Independence<K> {
    pub fn holds(&self) -> bool {
        self.wedge.as_ref().is_some_and(|w| !w.is_zero())
    }

    /// A nonzero `p x p` minor: column indices and value.
    pub fn witness(&self) -> Option<(Vec<usize>, Polynomial<K>)> {
        self.wedge
            .as_ref()?
            .terms()
            .next()
            .map(|(idx, c)| (idx.to_vec(), c.clone()))
    }
}

pub fn functional_independence<K: Scalar>(map: &PolyMap<K>) -> Result<Independence<K>> {
    if map.len() > map.arity() {
        return Ok(Independence { wedge: None });
    }
    let forms: Vec<DiffForm<K>> = map.components().iter().map(differential).collect();
    let refs: Vec<&DiffForm<K>> = forms.iter().collect();
    Ok(Independence {
        wedge: Some(wedge_all(&refs)?),
    })
}

/// Verdict on the harmonic first integral map conditions.
#[derive(Debug, Clone)]
pub struct HarmonicVerdict<K: Scalar> {
    pub laplacians: Vec<Polynomial<K>>,
    pub gram: GramResult<K>,
    pub independence: Independence<K>,
    /// Set when hwc held for `p >= 2`, so harmonicity is implied for polynomial maps.
    pub harmonicity_implied: bool,
    /// Laplacians nonzero although harmonicity was implied.
    pub alarm: Option<String>,
}

impl<K: Scalar> HarmonicVerdict<K> {
    pub fn laplacians_vanish(&self) -> bool {
        self.laplacians.iter().all(Polynomial::is_zero)
    }

    pub fn holds(&self) -> bool {
        self.laplacians_vanish() && self.gram.hwc && self.independence.holds()
    }
}

pub fn harmonic_first_integral_map<K: Scalar>(map: &PolyMap<K>) -> Result<HarmonicVerdict<K>> {
    let laplacians: Vec<Polynomial<K>> = map.components().par_iter().map(laplacian).collect();
    let gram = gram(map);
    let independence = functional_independence(map)?;
    // for p = 1 the Gram condition is vacuous and implies nothing
    let harmonicity_implied = gram.hwc && map.len() >= 2;
    let alarm = if harmonicity_implied {
        laplacians.iter().enumerate().find(|(_, l)| !l.is_zero()).map(|(a, l)| {
            format!(
                "map is horizontally weakly conformal and polynomial, yet Δf{} = {l} ≠ 0",
                a + 1
            )
        })
    } else {
        None
    };
    Ok(HarmonicVerdict {
        laplacians,
        gram,
        independence,
        harmonicity_implied,
        alarm,
    })
}

#[derive(Debug, Clone)]
pub struct HomothetyTest<K: Scalar> {
    /// `Holds`, `Unknown` (sufficient test failed) or `Inapplicable` (not hwc).
    pub status: Status,
    /// `⟨∇λ², ∇f_α⟩` per component; empty when inapplicable.
    pub residuals: Vec<Polynomial<K>>,
}

pub const HOMOTHETY_CRITERION: &str = "sufficient test: ⟨∇λ², ∇f_α⟩ ≡ 0 for every α";

pub fn horizontally_homothetic_sufficient<K: Scalar>(map: &PolyMap<K>) -> HomothetyTest<K> {
    let g = gram(map);
    let Some(lambda_sq) = g.lambda_sq else {
        return HomothetyTest {
            status: Status::Inapplicable,
            residuals: Vec::new(),
        };
    };
    let residuals: Vec<Polynomial<K>> = map.components().iter().map(|f| gradient_dot(&lambda_sq, f)).collect();
    let status = if residuals.iter().all(Polynomial::is_zero) {
        Status::Holds
    } else {
        Status::Unknown
    };
    HomothetyTest { status, residuals }
}

/// Generators of the rank-deficiency locus of `DF`.
#[derive(Debug, Clone)]
pub struct SingularIdeal<K: Scalar> {
    /// Nonzero `p x p` minors. Empty means the zero ideal: rank is never `p`.
    pub minors: Vec<Polynomial<K>>,
    /// For hwc maps, the equivalent generator set of all first partials.
    pub hwc_generators: Option<Vec<Polynomial<K>>>,
}

pub fn singular_ideal<K: Scalar>(map: &PolyMap<K>) -> Result<SingularIdeal<K>> {
    let ind = functional_independence(map)?;
    let minors = ind
        .wedge
        .map(|w| w.terms().map(|(_, c)| c.clone()).collect())
        .unwrap_or_default();
    let hwc_generators = gram(map).hwc.then(|| {
        let mut partials: Vec<Polynomial<K>> = map.jacobian().into_iter().flatten().filter(|g| !g.is_zero()).collect();
        partials.dedup();
        partials
    });
    Ok(SingularIdeal { minors, hwc_generators })
}

/// Checks the map is nonempty and fits the exterior envelope.
pub fn check_map<K: Scalar>(map: &PolyMap<K>) -> Result<()> {
    if map.arity() > crate::exterior::MAX_ARITY {
        return Err(Error::TooManyVariables(map.arity()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_polynomial, Map, Poly, VariableContext};
    use std::sync::Arc;

    fn ctx(names: &[&str]) -> Arc<VariableContext> {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn map(c: &Arc<VariableContext>, comps: &[&str]) -> Map {
        PolyMap::new(comps.iter().map(|s| parse_polynomial(s, c).unwrap()).collect()).unwrap()
    }

    fn p(c: &Arc<VariableContext>, s: &str) -> Poly {
        parse_polynomial(s, c).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let c = ctx(&["x", "y", "z", "w"]);
        assert!(laplacian(&p(&c, "x^2 + y^2 - z^2 - w^2")).is_zero());
        assert_eq!(laplacian(&p(&c, "x^2 + y^2")), p(&c, "4"));
        let c8 = ctx(&["x", "y", "z", "w", "a", "b", "c", "d"]);
        assert!(laplacian(&p(&c8, "2*(x^2+y^2)+3*(a^2+b^2)-2*(z^2+w^2)-3*(c^2+d^2)")).is_zero());
    }

    #[test]
    fn one_form_examples() {
        let c = ctx(&["x", "y", "z", "w"]);
        let df = differential(&p(&c, "x^2 + y^2 - z^2 - w^2"));
        assert!(one_form_harmonic(&df).unwrap().holds());

        let c2 = ctx(&["x", "y"]);
        let x_dx = DiffForm::one_form(vec![p(&c2, "x"), p(&c2, "0")]).unwrap();
        let r = one_form_harmonic(&x_dx).unwrap();
        assert!(r.d_residual.is_zero());
        assert_eq!(r.divergence, p(&c2, "1"));

        let y_dx = DiffForm::one_form(vec![p(&c2, "y"), p(&c2, "0")]).unwrap();
        let r = one_form_harmonic(&y_dx).unwrap();
        assert_eq!(r.d_residual.coefficient(&[0, 1]), p(&c2, "-1"));
        assert!(!r.holds());

        assert!(one_form_harmonic(&DiffForm::function(&p(&c2, "x"))).is_err());
    }

    #[test]
    fn gram_examples() {
        let c = ctx(&["x", "y", "a", "b"]);
        let g = gram(&map(&c, &["a^2*x - 2*a*b*y - b^2*x", "a^2*y + 2*a*b*x - b^2*y"]));
        assert!(g.hwc);
        assert_eq!(g.lambda_sq.unwrap(), p(&c, "(a^2+b^2)*(a^2+b^2+4*x^2+4*y^2)"));

        let c8 = ctx(&["x", "y", "z", "w", "a", "b", "c", "d"]);
        let q = map(
            &c8,
            &[
                "a*x-b*y-c*z-d*w",
                "a*y+b*x-c*w+d*z",
                "a*z+b*w+c*x-d*y",
                "a*w-b*z+c*y+d*x",
            ],
        );
        let g = gram(&q);
        assert!(g.hwc);
        assert_eq!(g.lambda_sq.unwrap(), p(&c8, "a^2+b^2+c^2+d^2+w^2+x^2+y^2+z^2"));

        let c2 = ctx(&["x", "y"]);
        let g = gram(&map(&c2, &["x", "x"]));
        assert!(!g.hwc);
        assert_eq!(g.nonzero_off_diagonal()[0].2, &p(&c2, "1"));
    }

    #[test]
    fn independence_examples() {
        let c = VariableContext::numbered(4);
        let foliation = map(&c, &["x1", "3*x1^2*x2 + x2^3 + x3^2 + x4^2"]);
        assert!(functional_independence(&foliation).unwrap().holds());

        let c2 = ctx(&["x", "y"]);
        assert!(!functional_independence(&map(&c2, &["x", "2*x"])).unwrap().holds());
        assert!(!functional_independence(&map(&c2, &["x", "y", "x*y"])).unwrap().holds());

        let h = ctx(&["x", "y", "z", "w"]);
        let hopf = functional_independence(&map(&h, &["x^2+y^2-z^2-w^2", "2*(x*z+y*w)"])).unwrap();
        assert!(hopf.holds());
        // dx∧dz minor: 2x·2x - (-2z)·2z = 4x² + 4z²
        assert_eq!(hopf.wedge.unwrap().coefficient(&[0, 2]), p(&h, "4*x^2 + 4*z^2"));
    }

    #[test]
    fn verdicts() {
        let h = ctx(&["x", "y", "z", "w"]);
        let v = harmonic_first_integral_map(&map(&h, &["x^2+y^2-z^2-w^2", "2*(x*z+y*w)"])).unwrap();
        assert!(v.holds() && v.harmonicity_implied && v.alarm.is_none());

        let c2 = ctx(&["x", "y"]);
        let v = harmonic_first_integral_map(&map(&c2, &["x^2+y^2", "x*y"])).unwrap();
        assert!(!v.gram.hwc);
        assert!(!v.holds());
        assert_eq!(v.gram.diagonal_defects()[0].1, p(&c2, "-3*x^2 - 3*y^2"));

        // single component: Gram condition vacuous, no alarm
        let v = harmonic_first_integral_map(&map(&c2, &["x^2+y^2"])).unwrap();
        assert!(v.gram.hwc && !v.harmonicity_implied && v.alarm.is_none() && !v.holds());
    }

    #[test]
    fn homothety() {
        let c8 = ctx(&["x", "y", "z", "w", "a", "b", "c", "d"]);
        let q = map(
            &c8,
            &[
                "a*x-b*y-c*z-d*w",
                "a*y+b*x-c*w+d*z",
                "a*z+b*w+c*x-d*y",
                "a*w-b*z+c*y+d*x",
            ],
        );
        let t = horizontally_homothetic_sufficient(&q);
        assert_eq!(t.status, Status::Unknown);
        assert_eq!(t.residuals[0], p(&c8, "4*(a*x-b*y-c*z-d*w)"));

        let c2 = ctx(&["x", "y"]);
        assert_eq!(
            horizontally_homothetic_sufficient(&map(&c2, &["x", "y"])).status,
            Status::Holds
        );
        assert_eq!(
            horizontally_homothetic_sufficient(&map(&c2, &["x^2", "y"])).status,
            Status::Inapplicable
        );
    }

    #[test]
    fn singular_ideals() {
        let h = ctx(&["x", "y", "z", "w"]);
        let s = singular_ideal(&map(&h, &["x^2+y^2-z^2-w^2", "2*(x*z+y*w)"])).unwrap();
        assert_eq!(s.minors.len(), 6);
        assert_eq!(s.hwc_generators.unwrap().len(), 8);

        let c1 = ctx(&["x"]);
        let s = singular_ideal(&map(&c1, &["x"])).unwrap();
        assert_eq!(s.minors, vec![p(&c1, "1")]);
    }
}
