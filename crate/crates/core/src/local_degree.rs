//! Local degree of a gradient map at the origin via the Eisenbud–Levine
//! signature formula, with floating point cross-checks.

#![allow(clippy::needless_range_loop)] // dense matrix code reads better with indices

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::{
    buchberger, ideal_dimension, normal_form, origin_is_only_zero, quotient_algebra, GroebnerBasis, QuotientAlgebra,
};
use crate::map::PolyMap;
use crate::numeric::{preimage_degree, winding_with_retry, OracleFailure, PreimageEstimate, PreimageOptions};
use crate::poly::{Homogeneity, Polynomial};
use crate::scalar::{ExactField, OrderedField};

/// Exact-field scalars with an order, as needed for signatures.
pub trait DegreeField: ExactField + OrderedField {}
impl<K: ExactField + OrderedField> DegreeField for K {}

/// Determinant of a square polynomial matrix, reduced modulo `gb` after
/// every product. Laplace expansion with memoization over column subsets.
pub fn determinant_mod<K: ExactField>(matrix: &[Vec<Polynomial<K>>], gb: &GroebnerBasis<K>) -> Result<Polynomial<K>> {
    let n = matrix.len();
    if n > 20 {
        return Err(Error::TooManyVariables(n));
    }
    let ctx = gb.context().clone();
    let mut memo: HashMap<u32, Polynomial<K>> = HashMap::new();
    memo.insert((1u32 << n) - 1, Polynomial::one(&ctx));
    fn rec<K: ExactField>(
        mask: u32,
        n: usize,
        m: &[Vec<Polynomial<K>>],
        gb: &GroebnerBasis<K>,
        memo: &mut HashMap<u32, Polynomial<K>>,
    ) -> Polynomial<K> {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let row = mask.count_ones() as usize;
        let mut acc = Polynomial::zero(gb.context());
        let mut pos = 0usize;
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let minor = rec(mask | (1 << c), n, m, gb, memo);
                if !minor.is_zero() {
                    let term = normal_form(&(entry * &minor), gb);
                    acc = if pos.is_multiple_of(2) {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    Ok(rec(0, n, matrix, gb, &mut memo))
}

/// Signature counts of a symmetric matrix by congruence reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

pub fn inertia<K: DegreeField>(matrix: &[Vec<K>]) -> Inertia {
    let n = matrix.len();
    let mut a: Vec<Vec<K>> = matrix.to_vec();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    let swap = |a: &mut Vec<Vec<K>>, i: usize, j: usize| {
        if i != j {
            a.swap(i, j);
            for row in a.iter_mut() {
                row.swap(i, j);
            }
        }
    };
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap(&mut a, i, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !a[i][j].is_zero())
        {
            // row/col i += row/col j makes the diagonal entry 2 a_ij
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] = a[i][c].clone() + v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] = a[r][i].clone() + v;
            }
            swap(&mut a, i, k);
        } else {
            out.zero += n - k;
            break;
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
        for i in k + 1..n {
            a[k][i] = K::zero();
        }
    }
    out
}

/// `B_ij = φ(b_i b_j)` on the quotient basis.
pub fn bilinear_form<K: DegreeField>(q: &QuotientAlgebra<K>, functional: &[K]) -> Vec<Vec<K>> {
    let n = q.dim();
    let apply = |p: &Polynomial<K>| {
        p.terms().fold(K::zero(), |acc, (m, c)| {
            let k = q.position(m).expect("normal form is standard");
            acc + c.clone() * functional[k].clone()
        })
    };
    let mut b = vec![vec![K::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = apply(&q.basis_product(i, j));
            b[j][i] = v.clone();
            b[i][j] = v;
        }
    }
    b
}

/// Value of a functional on a reduced element.
pub fn apply_functional<K: DegreeField>(q: &QuotientAlgebra<K>, functional: &[K], p: &Polynomial<K>) -> K {
    q.coordinates(p)
        .into_iter()
        .zip(functional)
        .fold(K::zero(), |acc, (a, b)| acc + a * b.clone())
}

#[derive(Debug, Clone)]
pub struct ElCertificate<K: ExactField> {
    pub quotient: QuotientAlgebra<K>,
    pub hessian_residue: Polynomial<K>,
    pub functional: Vec<K>,
    pub form_matrix: Vec<Vec<K>>,
    pub inertia: Inertia,
    /// Independent functional from the seeded generator, with its signature.
    pub check_functional: Vec<K>,
    pub check_signature: i64,
}

impl<K: DegreeField> ElCertificate<K> {
    pub fn signature(&self) -> i64 {
        self.inertia.signature()
    }

    pub fn functionals_agree(&self) -> bool {
        self.check_signature == self.signature()
    }
}

#[derive(Debug, Clone)]
pub struct ElDegree<K: ExactField> {
    pub degree: i64,
    /// `None` when the gradient does not vanish at the origin.
    pub certificate: Option<ElCertificate<K>>,
}

impl<K: DegreeField> ElDegree<K> {
    /// Local Milnor number; zero at a regular point.
    pub fn local_milnor(&self) -> usize {
        self.certificate.as_ref().map_or(0, |c| c.quotient.dim())
    }
}

/// Sign-normalized dual of the highest monomial in the support of `j`.
pub fn default_functional<K: DegreeField>(q: &QuotientAlgebra<K>, j: &Polynomial<K>) -> Option<Vec<K>> {
    let (m, c) = j.leading_term()?;
    let mut phi = vec![K::zero(); q.dim()];
    phi[q.position(m)?] = if c.is_positive() { K::one() } else { -K::one() };
    Some(phi)
}

/// Random sparse functional with `φ(J) > 0`, deterministic in `seed`.
pub fn random_functional<K: DegreeField>(q: &QuotientAlgebra<K>, j: &Polynomial<K>, seed: u64) -> Option<Vec<K>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let phi: Vec<K> = (0..q.dim())
            .map(|_| {
                if rng.random_bool(0.5) {
                    let n: i64 = rng.random_range(-9..=9);
                    let d: i64 = rng.random_range(1..=4);
                    K::from_i64(n) / K::from_i64(d)
                } else {
                    K::zero()
                }
            })
            .collect();
        let v = apply_functional(q, &phi, j);
        if !v.is_zero() {
            return Some(if v.is_positive() {
                phi
            } else {
                phi.into_iter().map(|x| -x).collect()
            });
        }
    }
    None
}

/// Signature of the form built from `functional`, after checking `φ(J) > 0`.
pub fn signature_with<K: DegreeField>(q: &QuotientAlgebra<K>, j: &Polynomial<K>, functional: &[K]) -> Result<Inertia> {
    if !apply_functional(q, functional, j).is_positive() {
        return Err(Error::Inconsistency(
            "functional is not positive on the Hessian residue".into(),
        ));
    }
    Ok(inertia(&bilinear_form(q, functional)))
}

/// Local degree of `∇f` at the origin by the Eisenbud–Levine formula.
pub fn el_degree<K: DegreeField>(f: &Polynomial<K>, seed: u64) -> Result<ElDegree<K>> {
    let ctx = f.context().clone();
    let n = ctx.arity();
    let grad = f.gradient();
    let origin = vec![K::zero(); n];
    let critical = grad
        .iter()
        .all(|g| g.evaluate(&origin).map(|v| v.is_zero()).unwrap_or(false));
    if !critical {
        return Ok(ElDegree {
            degree: 0,
            certificate: None,
        });
    }
    let gb = buchberger(&grad)?;
    let dim = ideal_dimension(&gb).dim;
    if dim > 0 {
        return Err(if matches!(f.homogeneity(), Homogeneity::Degree(_)) {
            Error::InfiniteMilnorNumber
        } else {
            Error::Unsupported(
                "requires local standard bases: the gradient ideal is positive-dimensional and f is not homogeneous"
                    .into(),
            )
        });
    }
    if !origin_is_only_zero(&gb)? {
        return Err(Error::Unsupported(
            "requires local standard bases: the gradient vanishes away from the origin".into(),
        ));
    }
    let q = quotient_algebra(&gb)?;
    let hessian: Vec<Vec<Polynomial<K>>> = grad.iter().map(Polynomial::gradient).collect();
    let j = determinant_mod(&hessian, &gb)?;
    let functional = default_functional(&q, &j)
        .ok_or_else(|| Error::Inconsistency("Hessian determinant vanishes in the local algebra".into()))?;
    let form_matrix = bilinear_form(&q, &functional);
    let inertia = inertia(&form_matrix);
    if inertia.zero != 0 {
        return Err(Error::Inconsistency("Eisenbud–Levine form is degenerate".into()));
    }
    let check_functional = random_functional(&q, &j, seed)
        .ok_or_else(|| Error::Inconsistency("no random functional positive on the Hessian residue".into()))?;
    let check_signature = signature_with(&q, &j, &check_functional)?.signature();
    Ok(ElDegree {
        degree: inertia.signature(),
        certificate: Some(ElCertificate {
            quotient: q,
            hessian_residue: j,
            functional,
            form_matrix,
            inertia,
            check_functional,
            check_signature,
        }),
    })
}

/// Numerical oracle outcomes for one gradient.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub radius: f64,
    pub target_norm: f64,
    /// Only for two variables.
    pub winding: Option<std::result::Result<i64, OracleFailure>>,
    pub preimage: std::result::Result<PreimageEstimate, OracleFailure>,
    pub retried: bool,
}

impl OracleReport {
    pub fn winding_value(&self) -> Option<i64> {
        self.winding.as_ref().and_then(|w| w.as_ref().ok().copied())
    }

    pub fn preimage_value(&self) -> Option<i64> {
        self.preimage.as_ref().ok().map(|p| p.degree)
    }
}

/// Runs the winding (two variables) and preimage oracles on `∇f`.
pub fn gradient_oracles<K: DegreeField>(f: &Polynomial<K>, seed: u64) -> Result<OracleReport> {
    let grad: Vec<Polynomial<f64>> = f
        .gradient()
        .iter()
        .map(|g| g.map_coefficients(|c| c.to_f64()))
        .collect();
    let g = PolyMap::new(grad)?;
    let homogeneous = matches!(f.homogeneity(), Homogeneity::Degree(_));
    let (mut radius, mut target) = if homogeneous { (1.0, 1.0) } else { (0.125, 1.0 / 64.0) };
    let run = |radius: f64, target: f64| {
        let winding = (g.arity() == 2).then(|| winding_with_retry(&g, radius).map(|(d, _)| d));
        let opts = PreimageOptions {
            target_norm: target,
            seed_radius: 4.0 * radius,
            count_radius: (!homogeneous).then_some(4.0 * radius),
            seeds: 256 * g.arity(),
            rng_seed: seed,
        };
        (winding, preimage_degree(&g, &opts))
    };
    let (mut winding, mut preimage) = run(radius, target);
    let mut retried = false;
    let bad =
        |w: &Option<std::result::Result<i64, OracleFailure>>,
         p: &std::result::Result<PreimageEstimate, OracleFailure>| { matches!(w, Some(Err(_))) || p.is_err() };
    if !homogeneous && bad(&winding, &preimage) {
        radius /= 2.0;
        target /= 2.0;
        retried = true;
        (winding, preimage) = run(radius, target);
    }
    Ok(OracleReport {
        radius,
        target_norm: target,
        winding,
        preimage,
        retried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_polynomial, Poly, Rational, VariableContext};
    use num_traits::Zero;
    use std::sync::Arc;

    fn p(c: &Arc<VariableContext>, s: &str) -> Poly {
        parse_polynomial(s, c).unwrap()
    }

    #[test]
    fn quadric_degree_one() {
        let c = VariableContext::new(["x", "y", "z", "w"]).unwrap();
        let d = el_degree(&p(&c, "x^2 + y^2 - z^2 - w^2"), 1).unwrap();
        assert_eq!(d.degree, 1);
        let cert = d.certificate.unwrap();
        assert_eq!(cert.quotient.dim(), 1);
        assert_eq!(cert.hessian_residue, p(&c, "16"));
        assert!(cert.functionals_agree());
    }

    #[test]
    fn monkey_saddle_degree() {
        let c = VariableContext::new(["x", "y"]).unwrap();
        let d = el_degree(&p(&c, "x^3 - 3*x*y^2"), 1).unwrap();
        assert_eq!(d.degree, -2);
        let cert = d.certificate.unwrap();
        assert_eq!(cert.hessian_residue, p(&c, "-72*y^2"));
        assert_eq!(cert.quotient.dim(), 4);
        assert_eq!(cert.inertia.zero, 0);
        assert!(cert.functionals_agree());
        let o = gradient_oracles(&p(&c, "x^3 - 3*x*y^2"), 5).unwrap();
        assert_eq!(o.winding_value(), Some(-2));
        assert_eq!(o.preimage_value(), Some(-2));
    }

    #[test]
    fn regular_point_and_non_isolated() {
        let c = VariableContext::numbered(3);
        assert_eq!(el_degree(&p(&c, "x1"), 0).unwrap().degree, 0);
        let c2 = VariableContext::new(["x", "y"]).unwrap();
        assert_eq!(el_degree(&p(&c2, "x^2"), 0).unwrap_err(), Error::InfiniteMilnorNumber);
        // critical points at 0 and at x = 2/3
        assert!(matches!(
            el_degree(&p(&c2, "x^3 - x^2 + y^2"), 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let m = vec![
            vec![Rational::zero(), crate::rat(1, 1)],
            vec![crate::rat(1, 1), Rational::zero()],
        ];
        let i = inertia(&m);
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let z = vec![vec![Rational::zero(); 2]; 2];
        assert_eq!(inertia(&z).zero, 2);
    }
}
