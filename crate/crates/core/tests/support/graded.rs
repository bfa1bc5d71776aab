//! Milnor numbers of homogeneous polynomials by plain linear algebra: the
//! gradient ideal is graded, so the quotient dimension is the sum over
//! degrees of (monomial count - rank of the degree-k slice).

#![allow(clippy::needless_range_loop)]

use milnorfib::{Monomial, Poly, Rational};
use num_traits::{One, Zero};

pub fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![k]];
    }
    (0..=k)
        .rev()
        .flat_map(|e| {
            monomials(n - 1, k - e).into_iter().map(move |mut rest| {
                rest.insert(0, e);
                rest
            })
        })
        .collect()
}

pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone() * inv.clone();
                for j in c..cols {
                    let v = rows[r][j].clone() * factor.clone();
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Quotient dimension for homogeneous `f` of degree `d` in `n` variables,
/// or `None` if some degree up to `limit` is not killed.
pub fn graded_milnor(f: &Poly, n: usize, d: u32, limit: u32) -> Option<usize> {
    let grad = f.gradient();
    let mut total = 0;
    for k in 0..=limit {
        let basis = monomials(n, k);
        let rows: Vec<Vec<Rational>> = if k + 1 < d {
            Vec::new()
        } else {
            monomials(n, k + 1 - d)
                .into_iter()
                .flat_map(|a| {
                    let m = Monomial::from_exponents(a);
                    grad.iter().map(move |g| g.mul_monomial(&m)).collect::<Vec<_>>()
                })
                .map(|p| {
                    basis
                        .iter()
                        .map(|e| p.coefficient(&Monomial::from_exponents(e.clone())))
                        .collect()
                })
                .collect()
        };
        let r = if rows.is_empty() { 0 } else { rank(rows) };
        let missing = basis.len() - r;
        if k == limit {
            return (missing == 0).then_some(total);
        }
        total += missing;
    }
    unreachable!()
}
