//! Floating point degree oracles: planar winding numbers and signed
//! preimage counts by damped Newton iteration. These are evidence only;
//! the exact degree comes from [`crate::local_degree`].

#![allow(clippy::needless_range_loop)] // dense matrix code reads better with indices

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::map::PolyMap;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Floating point scalars usable by the oracles.
pub trait Real: Scalar + Float {}
impl<T: Scalar + Float> Real for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleFailure {
    /// The map (nearly) vanishes on the sampled circle.
    ZeroOnCircle,
    /// Increments stayed too large at the finest sampling.
    Inconclusive,
    /// Newton converged from no seed.
    NoEvidence,
    /// The oracle does not accept this shape of input.
    WrongShape,
}

impl std::fmt::Display for OracleFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleFailure::ZeroOnCircle => "zero detected on circle",
            OracleFailure::Inconclusive => "oracle inconclusive",
            OracleFailure::NoEvidence => "no evidence",
            OracleFailure::WrongShape => "wrong shape",
        })
    }
}

fn cast<T: Real>(x: f64) -> T {
    T::from(x).expect("finite constant")
}

const MAX_WINDING_SAMPLES: usize = 1 << 20;

/// Winding number of `t -> G(r cos t, r sin t)` around the origin.
pub fn winding_degree_2d<T: Real>(g: &PolyMap<T>, radius: T) -> Result<i64, OracleFailure> {
    if g.len() != 2 || g.arity() != 2 {
        return Err(OracleFailure::WrongShape);
    }
    let two_pi = cast::<T>(std::f64::consts::TAU);
    let half_pi = cast::<T>(std::f64::consts::FRAC_PI_2);
    let pi = cast::<T>(std::f64::consts::PI);
    let tiny = T::epsilon().sqrt();
    let mut n = 64usize;
    while n <= MAX_WINDING_SAMPLES {
        let mut angles = Vec::with_capacity(n);
        let mut norms = Vec::with_capacity(n);
        for k in 0..n {
            let t = two_pi * cast::<T>(k as f64) / cast::<T>(n as f64);
            let pt = [radius * t.cos(), radius * t.sin()];
            let v = g.evaluate(&pt).expect("two coordinates");
            norms.push(v[0].hypot(v[1]));
            angles.push(v[1].atan2(v[0]));
        }
        let max = norms.iter().copied().fold(T::zero(), T::max);
        let min = norms.iter().copied().fold(T::infinity(), T::min);
        if max.is_nan() || max <= T::zero() || min <= max * tiny {
            return Err(OracleFailure::ZeroOnCircle);
        }
        let mut total = T::zero();
        let mut ok = true;
        for k in 0..n {
            let mut d = angles[(k + 1) % n] - angles[k];
            while d > pi {
                d = d - two_pi;
            }
            while d <= -pi {
                d = d + two_pi;
            }
            if d.abs() >= half_pi {
                ok = false;
                break;
            }
            total = total + d;
        }
        if ok {
            return (total / two_pi).round().to_i64().ok_or(OracleFailure::Inconclusive);
        }
        n *= 2;
    }
    Err(OracleFailure::Inconclusive)
}

/// Winding number with one retry at a slightly perturbed radius.
pub fn winding_with_retry<T: Real>(g: &PolyMap<T>, radius: T) -> Result<(i64, T), OracleFailure> {
    match winding_degree_2d(g, radius) {
        Ok(d) => Ok((d, radius)),
        Err(OracleFailure::ZeroOnCircle) => {
            let r2 = radius * cast::<T>(1.0 + 1.0 / 64.0);
            winding_degree_2d(g, r2).map(|d| (d, r2))
        }
        Err(e) => Err(e),
    }
}

/// Solves `a x = b` by partial pivoting; returns `x` and the sign of `det a`.
pub fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<(Vec<T>, i32)> {
    let n = b.len();
    let mut sign = 1;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !a[piv][col].is_finite() || a[piv][col].abs() <= T::zero() {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            b.swap(piv, col);
            sign = -sign;
        }
        if a[col][col] < T::zero() {
            sign = -sign;
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != T::zero() {
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] = a[r][c] - f * v;
                }
                b[r] = b[r] - f * b[col];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s = s - a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some((x, sign))
}

/// First `count` points of the Halton sequence in `[0,1)^dim`.
pub fn halton(count: usize, dim: usize) -> Vec<Vec<f64>> {
    const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    (1..=count as u64)
        .map(|i| {
            PRIMES[..dim]
                .iter()
                .map(|&b| {
                    let (mut f, mut r, mut k) = (1.0, 0.0, i);
                    while k > 0 {
                        f /= b as f64;
                        r += f * (k % b) as f64;
                        k /= b;
                    }
                    r
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PreimageEstimate {
    pub degree: i64,
    pub target: Vec<f64>,
    /// Distinct solutions with the sign of `det DG`.
    pub solutions: Vec<(Vec<f64>, i32)>,
    pub seeds: usize,
    pub note: &'static str,
}

pub struct PreimageOptions<T> {
    pub target_norm: T,
    /// Seeds are drawn from the cube `[-seed_radius, seed_radius]^n`.
    pub seed_radius: T,
    /// Solutions farther than this from the origin are not counted.
    pub count_radius: Option<T>,
    pub seeds: usize,
    pub rng_seed: u64,
}

/// Random unit direction from the seeded generator, scaled to `norm`.
pub fn random_target<T: Real>(dim: usize, norm: T, rng: &mut ChaCha8Rng) -> Vec<T> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.25 {
            return v.iter().map(|x| norm * cast::<T>(x / len)).collect();
        }
    }
}

/// Signed count of solutions of `G(x) = v` found by damped Newton.
pub fn preimage_degree<T: Real>(g: &PolyMap<T>, opts: &PreimageOptions<T>) -> Result<PreimageEstimate, OracleFailure> {
    let n = g.arity();
    if g.len() != n || n > 16 {
        return Err(OracleFailure::WrongShape);
    }
    let jac: Vec<Vec<Polynomial<T>>> = g.jacobian();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let target = random_target(n, opts.target_norm, &mut rng);
    let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();

    let residual = |x: &[T]| -> Vec<T> {
        g.evaluate(x)
            .expect("arity")
            .into_iter()
            .zip(&target)
            .map(|(a, b)| a - *b)
            .collect()
    };
    let norm = |v: &[T]| v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let jac_at = |x: &[T]| -> Vec<Vec<T>> {
        jac.iter()
            .map(|row| row.iter().map(|p| p.evaluate(x).expect("arity")).collect())
            .collect()
    };
    let tol = T::epsilon().sqrt() * opts.target_norm.max(T::epsilon());
    let dedup = T::epsilon().powf(cast(0.25)) * opts.seed_radius;

    let mut found: Vec<(Vec<T>, i32)> = Vec::new();
    let two = cast::<T>(2.0);
    for h in halton(opts.seeds, n) {
        let mut x: Vec<T> = h
            .iter()
            .zip(&shift)
            .map(|(a, s)| {
                let u = (a + s).fract();
                opts.seed_radius * cast::<T>(2.0 * u - 1.0)
            })
            .collect();
        let mut r = residual(&x);
        let mut rn = norm(&r);
        let mut converged = false;
        for _ in 0..80 {
            if rn <= tol {
                converged = true;
                break;
            }
            let neg: Vec<T> = r.iter().map(|v| -*v).collect();
            let Some((step, _)) = solve_dense(jac_at(&x), neg) else {
                break;
            };
            let mut alpha = T::one();
            let mut improved = false;
            for _ in 0..30 {
                let cand: Vec<T> = x.iter().zip(&step).map(|(a, s)| *a + alpha * *s).collect();
                let rc = residual(&cand);
                let rcn = norm(&rc);
                if rcn < rn {
                    x = cand;
                    r = rc;
                    rn = rcn;
                    improved = true;
                    break;
                }
                alpha = alpha / two;
            }
            if !improved || !rn.is_finite() {
                break;
            }
        }
        if !converged {
            continue;
        }
        if let Some(cap) = opts.count_radius {
            if norm(&x) > cap {
                continue;
            }
        }
        if found.iter().any(|(y, _)| {
            let d: Vec<T> = y.iter().zip(&x).map(|(a, b)| *a - *b).collect();
            norm(&d) < dedup
        }) {
            continue;
        }
        let Some((_, sign)) = solve_dense(jac_at(&x), vec![T::zero(); n]) else {
            continue;
        };
        found.push((x, sign));
    }
    if found.is_empty() {
        return Err(OracleFailure::NoEvidence);
    }
    found.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .find_map(|(p, q)| p.partial_cmp(q).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(PreimageEstimate {
        degree: found.iter().map(|(_, s)| i64::from(*s)).sum(),
        target: target.iter().map(|t| Scalar::to_f64(t)).collect(),
        solutions: found
            .into_iter()
            .map(|(x, s)| (x.iter().map(|v| Scalar::to_f64(v)).collect(), s))
            .collect(),
        seeds: opts.seeds,
        note: "lower-bound evidence: root finding may miss solutions",
    })
}

/// Levenberg–Marquardt search for a common zero of `fns` starting at `x0`.
/// Returns the point when the residual norm drops below `tol`.
pub fn least_squares_root<T: Real>(
    fns: &[Polynomial<T>],
    jac: &[Vec<Polynomial<T>>],
    x0: Vec<T>,
    tol: T,
    iters: usize,
) -> Option<Vec<T>> {
    let n = x0.len();
    let eval = |x: &[T]| -> Vec<T> { fns.iter().map(|f| f.evaluate(x).expect("arity")).collect() };
    let norm = |v: &[T]| v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let mut x = x0;
    let mut r = eval(&x);
    let mut rn = norm(&r);
    let mut mu = cast::<T>(1e-3);
    for _ in 0..iters {
        if rn <= tol {
            return Some(x);
        }
        let j: Vec<Vec<T>> = jac
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&x).expect("arity")).collect())
            .collect();
        let mut jtj = vec![vec![T::zero(); n]; n];
        let mut jtr = vec![T::zero(); n];
        for (row, ri) in j.iter().zip(&r) {
            for a in 0..n {
                jtr[a] = jtr[a] - row[a] * *ri;
                for b in 0..n {
                    jtj[a][b] = jtj[a][b] + row[a] * row[b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..20 {
            let mut damped = jtj.clone();
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] = row[a] + mu * (T::one() + jtj[a][a]);
            }
            if let Some((step, _)) = solve_dense(damped, jtr.clone()) {
                let cand: Vec<T> = x.iter().zip(&step).map(|(a, s)| *a + *s).collect();
                let rc = eval(&cand);
                let rcn = norm(&rc);
                if rcn.is_finite() && rcn < rn {
                    x = cand;
                    r = rc;
                    rn = rcn;
                    mu = (mu / cast(3.0)).max(cast(1e-12));
                    improved = true;
                    break;
                }
            }
            mu = mu * cast(4.0);
        }
        if !improved {
            break;
        }
    }
    (rn <= tol).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_polynomial_in, VariableContext};
    use std::sync::Arc;

    fn fmap<T: Real>(c: &Arc<VariableContext>, comps: &[&str]) -> PolyMap<T> {
        PolyMap::new(comps.iter().map(|s| parse_polynomial_in::<T>(s, c).unwrap()).collect()).unwrap()
    }

    fn opts<T: Real>(seeds: usize) -> PreimageOptions<T> {
        PreimageOptions {
            target_norm: T::one(),
            seed_radius: cast(4.0),
            count_radius: None,
            seeds,
            rng_seed: 7,
        }
    }

    #[test]
    fn winding_examples() {
        let c = VariableContext::new(["x", "y"]).unwrap();
        assert_eq!(winding_degree_2d(&fmap::<f64>(&c, &["2*x", "2*y"]), 1.0), Ok(1));
        assert_eq!(
            winding_degree_2d(&fmap::<f64>(&c, &["3*x^2 - 3*y^2", "-6*x*y"]), 1.0),
            Ok(-2)
        );
        assert_eq!(winding_degree_2d(&fmap::<f64>(&c, &["x^2 - y^2", "2*x*y"]), 1.0), Ok(2));
        assert_eq!(winding_degree_2d(&fmap::<f32>(&c, &["x^2 - y^2", "2*x*y"]), 1.0), Ok(2));
        // (x - 1, y) vanishes at (1, 0) on the unit circle
        let g = fmap::<f64>(&c, &["x - 1", "y"]);
        assert_eq!(winding_degree_2d(&g, 1.0), Err(OracleFailure::ZeroOnCircle));
        assert!(winding_with_retry(&g, 1.0).is_ok());
    }

    #[test]
    fn dense_solver() {
        let (x, s) = solve_dense(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![2.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 2.0]);
        assert_eq!(s, -1);
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_none());
    }

    #[test]
    fn preimage_examples() {
        let c = VariableContext::new(["x", "y", "z", "w"]).unwrap();
        let hopf = fmap::<f64>(&c, &["2*x", "2*y", "-2*z", "-2*w"]);
        let e = preimage_degree(&hopf, &opts(16)).unwrap();
        assert_eq!((e.degree, e.solutions.len()), (1, 1));

        let c2 = VariableContext::new(["x", "y"]).unwrap();
        let g = fmap::<f64>(&c2, &["3*x^2 - 3*y^2", "-6*x*y"]);
        let e = preimage_degree(&g, &opts(64)).unwrap();
        assert_eq!(e.degree, -2);
        assert!(e.solutions.iter().all(|(_, s)| *s == -1));

        let id = fmap::<f32>(&c2, &["x", "y"]);
        assert_eq!(preimage_degree(&id, &opts(8)).unwrap().degree, 1);
    }

    #[test]
    fn least_squares_finds_circle_point() {
        let c = VariableContext::new(["x", "y"]).unwrap();
        let f = vec![
            parse_polynomial_in::<f64>("x^2 + y^2 - 1", &c).unwrap(),
            parse_polynomial_in::<f64>("x - y", &c).unwrap(),
        ];
        let j: Vec<Vec<_>> = f.iter().map(|p| p.gradient()).collect();
        let x = least_squares_root(&f, &j, vec![0.9, 0.2], 1e-12, 100).unwrap();
        assert!((x[0] - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn halton_points_in_unit_cube() {
        let h = halton(100, 3);
        assert_eq!(h[0], vec![0.5, 1.0 / 3.0, 0.2]);
        assert!(h.iter().flatten().all(|&v| (0.0..1.0).contains(&v)));
    }
}
