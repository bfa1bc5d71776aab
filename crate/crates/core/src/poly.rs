//! Sparse multivariate polynomials over a coefficient field.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! graded reverse lexicographic order. The same order is used for printing
//! and for Gröbner computations. A stored coefficient is never zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered, unique variable names. Identity of a variable is its position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

impl VariableContext {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidContext("at least one variable required".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidContext(format!("`{n}` is not an identifier")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidContext(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(VariableContext { names }))
    }

    /// Context `x1, ..., xn`.
    pub fn numbered(n: usize) -> Arc<Self> {
        Self::new((1..=n).map(|i| format!("x{i}"))).expect("numbered context is valid")
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn check_same(a: &VariableContext, b: &VariableContext) -> Result<()> {
    if a.arity() == b.arity() {
        Ok(())
    } else {
        Err(Error::ContextMismatch {
            left: a.arity(),
            right: b.arity(),
        })
    }
}

/// Exponent vector, one slot per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial { exps: vec![0; arity] }
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut m = Self::one(arity);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// `Some(i)` when the monomial is a positive power of variable `i` alone.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut it = self.support();
        match (it.next(), it.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }

    /// Product of the variables in the support.
    pub fn radical(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&e| u32::from(e > 0)).collect(),
        }
    }

    pub fn all_even(&self) -> bool {
        self.exps.iter().all(|e| e % 2 == 0)
    }

    pub fn half(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| e / 2).collect(),
        }
    }

    pub fn format_with(&self, ctx: &VariableContext) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ctx.name(i).to_string()),
                _ => parts.push(format!("{}^{}", ctx.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Answer of [`Polynomial::homogeneity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Degree(u32),
    NotHomogeneous,
}

#[derive(Clone)]
pub struct Polynomial<K> {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Scalar> PartialEq for Polynomial<K> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.arity() == other.ctx.arity() && self.terms == other.terms
    }
}

impl<K: Scalar + Eq> Eq for Polynomial<K> {}

impl<K: Scalar> fmt::Debug for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<K: Scalar> Polynomial<K> {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: K) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.arity()), c);
        }
        p
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, K::one())
    }

    pub fn var(ctx: &Arc<VariableContext>, i: usize) -> Result<Self> {
        if i >= ctx.arity() {
            return Err(Error::IndexOutOfRange {
                index: i,
                arity: ctx.arity(),
            });
        }
        Ok(Self::monomial(ctx, Monomial::var(ctx.arity(), i), K::one()))
    }

    pub fn monomial(ctx: &Arc<VariableContext>, m: Monomial, c: K) -> Self {
        debug_assert_eq!(m.arity(), ctx.arity());
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(ctx: &Arc<VariableContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, K)>,
    {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.ctx.arity()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` for a constant polynomial (including zero).
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&K> {
        self.terms.values().next_back()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * m * other` in place.
    pub(crate) fn add_scaled_shifted(&mut self, c: &K, m: &Monomial, other: &Polynomial<K>) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), c.clone() * oc.clone());
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(c, m, other);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) => {
                let inv = K::one() / lc.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.arity() {
            return Err(Error::IndexOutOfRange {
                index: var,
                arity: self.arity(),
            });
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e > 0 {
                let mut dm = m.clone();
                dm.exps[var] -= 1;
                out.add_term(dm, c.clone() * K::from_i64(i64::from(e)));
            }
        }
        Ok(out)
    }

    /// Partial derivative with an index known to be valid.
    pub(crate) fn d(&self, var: usize) -> Self {
        self.partial_derivative(var).expect("variable index in range")
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.arity()).map(|i| self.d(i)).collect()
    }

    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if point.len() != self.arity() {
            return Err(Error::PointLength {
                expected: self.arity(),
                got: point.len(),
            });
        }
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::NotHomogeneous
                }
            }
        }
    }

    /// Sets the variables flagged in `zeroed` to zero.
    pub fn restrict_to_zero(&self, zeroed: &[bool]) -> Self {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.support().all(|i| !zeroed[i]))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, images: &[Self]) -> Result<Self> {
        if images.len() != self.arity() {
            return Err(Error::PointLength {
                expected: self.arity(),
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|p| p.ctx.clone())
            .unwrap_or_else(|| self.ctx.clone());
        for p in images {
            check_same(&target, &p.ctx)?;
        }
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(&m.exps) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn map_coefficients<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Polynomial<L> {
        Polynomial::from_terms(&self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Same terms, read in another context of equal arity.
    pub fn with_context(&self, ctx: &Arc<VariableContext>) -> Result<Self> {
        check_same(&self.ctx, ctx)?;
        Ok(Polynomial {
            ctx: ctx.clone(),
            terms: self.terms.clone(),
        })
    }
}

impl<K: Scalar> fmt::Display for Polynomial<K> {
    /// Canonical form: descending grevlex, explicit signs, `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&mag)?;
            } else if mag == "1" {
                f.write_str(&m.format_with(&self.ctx))?;
            } else {
                write!(f, "{}*{}", mag, m.format_with(&self.ctx))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<K: Scalar> $tr<&Polynomial<K>> for &Polynomial<K> {
            type Output = Polynomial<K>;
            /// Panics on a context mismatch; use the `checked_*` form for untrusted input.
            fn $method(self, rhs: &Polynomial<K>) -> Polynomial<K> {
                self.$checked(rhs).expect("polynomials share a context")
            }
        }

        impl<K: Scalar> $tr<Polynomial<K>> for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $method(self, rhs: Polynomial<K>) -> Polynomial<K> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<K: Scalar> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<K: Scalar> Neg for Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::{parse_polynomial, Poly};

    fn ctx(names: &[&str]) -> Arc<VariableContext> {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn p(c: &Arc<VariableContext>, s: &str) -> Poly {
        parse_polynomial(s, c).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(VariableContext::new(Vec::<String>::new()).is_err());
        assert!(VariableContext::new(["x", "x"]).is_err());
        assert!(VariableContext::new(["1x"]).is_err());
        assert_eq!(VariableContext::numbered(3).name(2), "x3");
    }

    #[test]
    fn grevlex_order() {
        let c = ctx(&["x", "y", "z"]);
        let m = |s: &str| p(&c, s).leading_monomial().unwrap().clone();
        assert!(m("x^2") > m("x*y"));
        assert!(m("x*y") > m("y^2"));
        assert!(m("y^2") > m("x*z"));
        assert!(m("x*z") > m("y*z"));
        assert!(m("z^3") > m("x^2"));
    }

    #[test]
    fn add_examples() {
        let c = ctx(&["x", "y"]);
        assert_eq!(&p(&c, "x^2 + y") + &p(&c, "-x^2"), p(&c, "y"));
        let q = p(&c, "x*y - 3");
        assert_eq!(&q + &Poly::zero(&c), q);
        assert_eq!(&p(&c, "x - y") + &p(&c, "x + y"), p(&c, "2*x"));
        let other = VariableContext::numbered(3);
        assert!(matches!(
            q.checked_add(&Poly::zero(&other)),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let c = ctx(&["x", "y", "a", "b"]);
        let lhs = &p(&c, "a^2 + b^2") * &p(&c, "a^2 + b^2 + 4*x^2 + 4*y^2");
        let rhs = p(
            &c,
            "a^4 + 2*a^2*b^2 + b^4 + 4*a^2*x^2 + 4*a^2*y^2 + 4*b^2*x^2 + 4*b^2*y^2",
        );
        assert_eq!(lhs, rhs);
        let q = p(&c, "x - 7/3*b");
        assert_eq!(&q * &Poly::one(&c), q);
        assert_eq!(&p(&c, "x + y") * &p(&c, "x - y"), p(&c, "x^2 - y^2"));
        assert!(q.checked_mul(&Poly::one(&VariableContext::numbered(1))).is_err());
    }

    #[test]
    fn derivative_examples() {
        let c = ctx(&["x", "y", "z", "w"]);
        assert_eq!(p(&c, "x^2 + y^2 - z^2 - w^2").d(0), p(&c, "2*x"));
        assert!(p(&c, "5").d(0).is_zero());
        assert!(matches!(
            p(&c, "x").partial_derivative(4),
            Err(Error::IndexOutOfRange { index: 4, arity: 4 })
        ));
        let c2 = ctx(&["x", "y", "a", "b"]);
        assert_eq!(p(&c2, "a^2*x - 2*a*b*y - b^2*x").d(2), p(&c2, "2*a*x - 2*b*y"));
    }

    #[test]
    fn evaluate_examples() {
        let c = ctx(&["x", "y"]);
        assert_eq!(
            p(&c, "x^2 + y^2").evaluate(&[rat(3, 1), rat(4, 1)]).unwrap(),
            rat(25, 1)
        );
        assert_eq!(Poly::zero(&c).evaluate(&[rat(1, 2), rat(9, 1)]).unwrap(), rat(0, 1));
        assert_eq!(
            p(&c, "x^3 - 3*x*y^2").evaluate(&[rat(1, 1), rat(1, 1)]).unwrap(),
            rat(-2, 1)
        );
        assert!(matches!(
            p(&c, "x").evaluate(&[rat(1, 1)]),
            Err(Error::PointLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn homogeneity_examples() {
        let c = ctx(&["x", "y", "z", "u"]);
        assert_eq!(p(&c, "x^2 + y^2 - z^2 - u^2").homogeneity(), Homogeneity::Degree(2));
        assert_eq!(
            p(&c, "5*u^4*z - 10*u^2*z^3 + z^5 + x^2 - y^2").homogeneity(),
            Homogeneity::NotHomogeneous
        );
        assert_eq!(Poly::zero(&c).homogeneity(), Homogeneity::Zero);
    }

    #[test]
    fn printing_is_canonical() {
        let c = ctx(&["x", "y"]);
        assert_eq!(p(&c, "-y^2 + 3/2*x*y - 1 + x^2").to_string(), "x^2 + 3/2*x*y - y^2 - 1");
        assert_eq!(p(&c, "-x").to_string(), "-x");
        assert_eq!(Poly::zero(&c).to_string(), "0");
    }

    #[test]
    fn float_coefficients_work() {
        let c = ctx(&["x", "y"]);
        let q = p(&c, "x^2 - 1/4*y").map_coefficients(crate::scalar::Scalar::to_f64);
        assert_eq!(q.evaluate(&[2.0, 4.0]).unwrap(), 3.0);
        let q32 = p(&c, "x*y").map_coefficients(|v| crate::scalar::Scalar::to_f64(v) as f32);
        assert_eq!(q32.d(0).evaluate(&[0.0, 2.5f32]).unwrap(), 2.5f32);
    }

    #[test]
    fn compose_and_restrict() {
        let c = ctx(&["x", "y"]);
        let q = p(&c, "x^2 + x*y + y");
        let img = [p(&c, "x + y"), p(&c, "2")];
        assert_eq!(q.compose(&img).unwrap(), p(&c, "x^2 + 2*x*y + y^2 + 2*x + 2*y + 2"));
        assert_eq!(q.restrict_to_zero(&[false, true]), p(&c, "x^2"));
    }
}
