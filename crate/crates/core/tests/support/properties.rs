//! Randomized algebraic identities, shared by the core test target and the
//! acceptance runner. Every property runs a fixed number of cases from a
//! seeded generator, so a given seed always replays the same inputs.

use std::sync::Arc;

use milnorfib::exterior::{differential, DiffForm, VectorField};
use milnorfib::harmonic::gram;
use milnorfib::ideals::{buchberger, normal_form};
use milnorfib::local_degree::{el_degree, random_functional, signature_with};
use milnorfib::map::PolyMap;
use milnorfib::{rat, Monomial, Poly, Rational, VariableContext};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 1000;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Number of cases run, or the minimal failing input.
pub type Outcome = Result<u32, String>;
pub type Property = fn(u64) -> Outcome;

fn check<S: Strategy>(seed: u64, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome
where
    S::Value: std::fmt::Debug,
{
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &key));
    runner.run(&strategy, test).map(|_| CASES).map_err(|e| e.to_string())
}

const N: usize = 3;

fn ctx3() -> Arc<VariableContext> {
    VariableContext::new(["x", "y", "z"]).unwrap()
}

fn build(ctx: &Arc<VariableContext>, terms: &[(Vec<u32>, i64)]) -> Poly {
    Poly::from_terms(
        ctx,
        terms
            .iter()
            .map(|(e, c)| (Monomial::from_exponents(e.clone()), rat(*c, 1))),
    )
}

/// Up to `t` terms of degree at most `d` per variable, small integer coefficients.
fn terms(arity: usize, d: u32, t: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=d, arity), -4i64..=4), 0..=t)
}

fn poly3(d: u32, t: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    terms(N, d, t)
}

/// `g0 · dg1 ∧ ... ∧ dgk`.
fn form(ctx: &Arc<VariableContext>, coeff: &[(Vec<u32>, i64)], factors: &[Vec<(Vec<u32>, i64)>]) -> DiffForm<Rational> {
    let mut w = DiffForm::function(&build(ctx, coeff));
    for g in factors {
        w = w.wedge(&differential(&build(ctx, g))).unwrap();
    }
    w
}

fn field(ctx: &Arc<VariableContext>, comps: &[Vec<(Vec<u32>, i64)>]) -> VectorField<Rational> {
    VectorField::new(comps.iter().map(|c| build(ctx, c)).collect()).unwrap()
}

fn sorted_basis(gens: &[Poly]) -> Vec<Poly> {
    let mut els = buchberger(gens).unwrap().elements().to_vec();
    els.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    els
}

/// Rational rotation from the Pythagorean triple built on `(s, t)`.
pub fn rotation(s: i64, t: i64) -> Vec<Vec<Rational>> {
    let h = s * s + t * t;
    let c = rat(s * s - t * t, h);
    let si = rat(2 * s * t, h);
    vec![vec![c.clone(), -si.clone()], vec![si, c]]
}

pub fn ring_axioms(seed: u64) -> Outcome {
    check(seed, (poly3(2, 4), poly3(2, 4), poly3(2, 4)), |(a, b, c)| {
        let ctx = ctx3();
        let (a, b, c) = (build(&ctx, &a), build(&ctx, &b), build(&ctx, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a * &Poly::one(&ctx), a);
        Ok(())
    })
}

pub fn derivative_is_a_derivation(seed: u64) -> Outcome {
    check(seed, (poly3(3, 4), poly3(3, 4), 0..N), |(a, b, i)| {
        let ctx = ctx3();
        let (a, b) = (build(&ctx, &a), build(&ctx, &b));
        let lhs = (&a * &b).partial_derivative(i).unwrap();
        let rhs = &(&a.partial_derivative(i).unwrap() * &b) + &(&a * &b.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn vector_fields_obey_leibniz(seed: u64) -> Outcome {
    check(
        seed,
        (prop::collection::vec(poly3(2, 3), N), poly3(2, 3), poly3(2, 3)),
        |(x, a, b)| {
            let ctx = ctx3();
            let x = field(&ctx, &x);
            let (a, b) = (build(&ctx, &a), build(&ctx, &b));
            let lhs = x.apply(&(&a * &b)).unwrap();
            let rhs = &(&x.apply(&a).unwrap() * &b) + &(&a * &x.apply(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )
}

pub fn euler_identity(seed: u64) -> Outcome {
    check(
        seed,
        (0u32..6, prop::collection::vec(-4i64..=4, 1..6), any::<u64>()),
        |(d, coeffs, seed)| {
            // Homogeneous of degree d: spread d over three exponents.
            let ctx = ctx3();
            let mut terms = Vec::new();
            for (k, c) in coeffs.iter().enumerate() {
                let s = seed.rotate_left(k as u32 * 7);
                let i = (s % (d as u64 + 1)) as u32;
                let j = ((s >> 8) % ((d - i) as u64 + 1)) as u32;
                terms.push((vec![i, j, d - i - j], *c));
            }
            let f = build(&ctx, &terms);
            let euler = (0..N).fold(Poly::zero(&ctx), |acc, i| {
                &acc + &(&Poly::var(&ctx, i).unwrap() * &f.partial_derivative(i).unwrap())
            });
            prop_assert_eq!(euler, f.scale(&rat(d as i64, 1)));
            Ok(())
        },
    )
}

pub fn d_squared_vanishes(seed: u64) -> Outcome {
    check(
        seed,
        (poly3(3, 4), prop::collection::vec(poly3(2, 3), 0..3)),
        |(c, g)| {
            let ctx = ctx3();
            let w = form(&ctx, &c, &g);
            prop_assert!(w.exterior_derivative().exterior_derivative().is_zero());
            Ok(())
        },
    )
}

pub fn wedge_graded_commutes(seed: u64) -> Outcome {
    check(
        seed,
        (
            poly3(2, 3),
            prop::collection::vec(poly3(2, 3), 0..3),
            poly3(2, 3),
            prop::collection::vec(poly3(2, 3), 0..3),
        ),
        |(c1, g1, c2, g2)| {
            let ctx = ctx3();
            let a = form(&ctx, &c1, &g1);
            let b = form(&ctx, &c2, &g2);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let expected = if (g1.len() * g2.len()) % 2 == 0 { ba } else { ba.neg() };
            prop_assert_eq!(ab, expected);
            Ok(())
        },
    )
}

pub fn exterior_derivative_leibniz(seed: u64) -> Outcome {
    check(
        seed,
        (
            poly3(2, 3),
            prop::collection::vec(poly3(2, 3), 0..2),
            poly3(2, 3),
            prop::collection::vec(poly3(2, 3), 0..2),
        ),
        |(c1, g1, c2, g2)| {
            let ctx = ctx3();
            let a = form(&ctx, &c1, &g1);
            let b = form(&ctx, &c2, &g2);
            let lhs = a.wedge(&b).unwrap().exterior_derivative();
            let first = a.exterior_derivative().wedge(&b).unwrap();
            let second = a.wedge(&b.exterior_derivative()).unwrap();
            let second = if g1.len() % 2 == 0 { second } else { second.neg() };
            prop_assert_eq!(lhs, first.checked_add(&second).unwrap());
            Ok(())
        },
    )
}

pub fn lie_bracket_jacobi(seed: u64) -> Outcome {
    check(
        seed,
        (
            prop::collection::vec(poly3(2, 2), N),
            prop::collection::vec(poly3(2, 2), N),
            prop::collection::vec(poly3(2, 2), N),
        ),
        |(x, y, z)| {
            let ctx = ctx3();
            let (x, y, z) = (field(&ctx, &x), field(&ctx, &y), field(&ctx, &z));
            let a = x.lie_bracket(&y.lie_bracket(&z).unwrap()).unwrap();
            let b = y.lie_bracket(&z.lie_bracket(&x).unwrap()).unwrap();
            let c = z.lie_bracket(&x.lie_bracket(&y).unwrap()).unwrap();
            prop_assert!(a.checked_add(&b).unwrap().checked_add(&c).unwrap().is_zero());
            Ok(())
        },
    )
}

pub fn reduced_basis_ignores_generator_order(seed: u64) -> Outcome {
    check(
        seed,
        (prop::collection::vec(terms(N, 2, 3), 1..4), 0usize..3),
        |(gens, shift)| {
            let ctx = ctx3();
            let gens: Vec<Poly> = gens.iter().map(|g| build(&ctx, g)).collect();
            let mut rotated = gens.clone();
            rotated.rotate_left(shift % gens.len());
            rotated.reverse();
            let gb = buchberger(&gens).unwrap();
            prop_assert!(gb.is_reduced());
            prop_assert_eq!(sorted_basis(&gens), sorted_basis(&rotated));
            Ok(())
        },
    )
}

pub fn normal_form_decides_membership(seed: u64) -> Outcome {
    check(
        seed,
        (
            prop::collection::vec(terms(N, 2, 3), 1..3),
            prop::collection::vec(poly3(1, 3), 2),
            poly3(3, 4),
        ),
        |(gens, mults, p)| {
            let ctx = ctx3();
            let gens: Vec<Poly> = gens.iter().map(|g| build(&ctx, g)).collect();
            let gb = buchberger(&gens).unwrap();
            for g in &gens {
                prop_assert!(gb.contains(g));
            }
            let combo = gens
                .iter()
                .zip(&mults)
                .fold(Poly::zero(&ctx), |acc, (g, h)| &acc + &(g * &build(&ctx, h)));
            prop_assert!(normal_form(&combo, &gb).is_zero());
            let p = build(&ctx, &p);
            let r = normal_form(&p, &gb);
            prop_assert!(gb.contains(&(&p - &r)));
            prop_assert_eq!(normal_form(&r, &gb), r.clone());
            // No term of the remainder is divisible by a leading monomial.
            for (m, _) in r.terms() {
                prop_assert!(gb.leading_monomials().iter().all(|lm| !lm.divides(m)));
            }
            Ok(())
        },
    )
}

/// `Σ c_i x_i^{d_i}` pulled back by an invertible integer matrix `L`.
/// The gradient of `f ∘ L` is `Lᵀ (∇f ∘ L)`, whose degree is that of
/// `∇f`: the product of the one-variable degrees of `c_i d_i x^{d_i-1}`.
pub fn el_signature_independent_of_functional(seed: u64) -> Outcome {
    check(
        seed,
        (
            2usize..=3,
            prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
            prop::collection::vec(2u32..=4, 3),
            prop::collection::vec(-2i64..=2, 9),
            prop::collection::vec(any::<u64>(), 3),
        ),
        |(n, c, d, l, seeds)| {
            let names = ["x", "y", "z"];
            let ctx = VariableContext::new(names[..n].iter().copied()).unwrap();
            let d: Vec<u32> = d.iter().take(n).map(|&e| if n == 3 { e.min(3) } else { e }).collect();
            let lm: Vec<Vec<i64>> = (0..n).map(|i| l[i * 3..i * 3 + n].to_vec()).collect();
            let det = if n == 2 {
                lm[0][0] * lm[1][1] - lm[0][1] * lm[1][0]
            } else {
                lm[0][0] * (lm[1][1] * lm[2][2] - lm[1][2] * lm[2][1])
                    - lm[0][1] * (lm[1][0] * lm[2][2] - lm[1][2] * lm[2][0])
                    + lm[0][2] * (lm[1][0] * lm[2][1] - lm[1][1] * lm[2][0])
            };
            prop_assume!(det != 0);
            let vars: Vec<Poly> = (0..n).map(|i| Poly::var(&ctx, i).unwrap()).collect();
            let images: Vec<Poly> = lm
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&vars)
                        .fold(Poly::zero(&ctx), |acc, (a, v)| &acc + &v.scale(&rat(*a, 1)))
                })
                .collect();
            let diag = (0..n).fold(Poly::zero(&ctx), |acc, i| {
                let mut e = vec![0; n];
                e[i] = d[i];
                &acc + &Poly::monomial(&ctx, Monomial::from_exponents(e), rat(c[i], 1))
            });
            let f = diag.compose(&images).unwrap();
            let el = el_degree(&f, seeds[0]).unwrap();
            let cert = el.certificate.as_ref().unwrap();
            prop_assert_eq!(
                cert.quotient.dim(),
                d.iter().map(|&e| (e - 1) as usize).product::<usize>()
            );
            prop_assert!(cert.functionals_agree());
            for &s in &seeds {
                let phi = random_functional(&cert.quotient, &cert.hessian_residue, s).unwrap();
                prop_assert_eq!(
                    signature_with(&cert.quotient, &cert.hessian_residue, &phi)
                        .unwrap()
                        .signature(),
                    el.degree
                );
            }
            let one_var = |c: i64, d: u32| if d.is_multiple_of(2) { c.signum() } else { 0 };
            prop_assert_eq!(el.degree, (0..n).map(|i| one_var(c[i], d[i])).product::<i64>());
            Ok(())
        },
    )
}

pub fn gram_is_equivariant_under_target_rotation(seed: u64) -> Outcome {
    check(
        seed,
        (prop::collection::vec(poly3(2, 3), 2), 1i64..6, 1i64..6),
        |(comps, s, t)| {
            let ctx = ctx3();
            let map = PolyMap::new(comps.iter().map(|c| build(&ctx, c)).collect()).unwrap();
            let r = rotation(s, t);
            let rotated = map.compose_linear(&r).unwrap();
            let g = gram(&map);
            let h = gram(&rotated);
            prop_assert_eq!(g.hwc, h.hwc);
            prop_assert_eq!(&g.lambda_sq, &h.lambda_sq);
            // H = R G Rᵀ entrywise.
            for a in 0..2 {
                for b in 0..2 {
                    let mut e = Poly::zero(&ctx);
                    for i in 0..2 {
                        for j in 0..2 {
                            e = &e + &g.gram[i][j].scale(&(r[a][i].clone() * r[b][j].clone()));
                        }
                    }
                    prop_assert_eq!(&h.gram[a][b], &e);
                }
            }
            Ok(())
        },
    )
}

pub fn rotated_power_maps_stay_conformal(seed: u64) -> Outcome {
    check(seed, (1u32..6, 1i64..8, 1i64..8), |(k, s, t)| {
        // (Re z^k, Im z^k) has λ² = k² |z|^{2k-2}.
        let ctx = VariableContext::new(["x", "y"]).unwrap();
        let x = Poly::var(&ctx, 0).unwrap();
        let y = Poly::var(&ctx, 1).unwrap();
        let (mut re, mut im) = (Poly::one(&ctx), Poly::zero(&ctx));
        for _ in 0..k {
            let nre = &(&re * &x) - &(&im * &y);
            im = &(&re * &y) + &(&im * &x);
            re = nre;
        }
        let map = PolyMap::new(vec![re, im]).unwrap();
        let rotated = map.compose_linear(&rotation(s, t)).unwrap();
        let expected = (&(&x * &x) + &(&y * &y)).pow(k - 1).scale(&rat((k * k) as i64, 1));
        prop_assert_eq!(gram(&map).lambda_sq, Some(expected.clone()));
        prop_assert_eq!(gram(&rotated).lambda_sq, Some(expected));
        Ok(())
    })
}

pub const PROPERTIES: &[(&str, Property)] = &[
    ("ring axioms", ring_axioms),
    ("Leibniz rule for partial derivatives", derivative_is_a_derivation),
    ("Leibniz rule for vector fields", vector_fields_obey_leibniz),
    ("Euler identity", euler_identity),
    ("d² = 0", d_squared_vanishes),
    ("graded anticommutativity of ∧", wedge_graded_commutes),
    ("graded Leibniz rule for d", exterior_derivative_leibniz),
    ("Jacobi identity", lie_bracket_jacobi),
    (
        "reduced basis independent of generator order",
        reduced_basis_ignores_generator_order,
    ),
    ("normal form decides ideal membership", normal_form_decides_membership),
    (
        "signature independent of the functional",
        el_signature_independent_of_functional,
    ),
    (
        "Gram matrix equivariant under target rotation",
        gram_is_equivariant_under_target_rotation,
    ),
    ("λ² of rotated conformal maps", rotated_power_maps_stay_conformal),
];
