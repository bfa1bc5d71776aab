//! Exterior calculus with polynomial coefficients on Euclidean space.
//!
//! A `k`-form is a map from strictly increasing index tuples to nonzero
//! polynomial coefficients. Multivectors (wedges of vector fields) use the
//! same storage with `∂` basis elements and back the involutivity test.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::map::PolyMap;
use crate::poly::{check_same, Polynomial, VariableContext};
use crate::scalar::Scalar;

/// Largest supported ambient dimension for forms and fields.
pub const MAX_ARITY: usize = 16;

fn check_envelope(ctx: &VariableContext) -> Result<()> {
    if ctx.arity() > MAX_ARITY {
        Err(Error::TooManyVariables(ctx.arity()))
    } else {
        Ok(())
    }
}

/// Merges two increasing tuples; `None` if they share an index.
/// The sign is the parity of the permutation sorting `a ++ b`.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

#[derive(Clone, PartialEq)]
struct Blades<K: Scalar> {
    ctx: Arc<VariableContext>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Polynomial<K>>,
}

impl<K: Scalar> Blades<K> {
    fn zero(ctx: &Arc<VariableContext>, degree: usize) -> Self {
        Blades {
            ctx: ctx.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Polynomial<K>) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&idx) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(idx, sum);
        }
    }

    fn wedge(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut out = Self::zero(&self.ctx, self.degree + other.degree);
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                if let Some((idx, negative)) = merge_indices(ia, ib) {
                    let prod = ca * cb;
                    out.add_term(idx, if negative { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, prefix: &str) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if idx.is_empty() {
                write!(f, "({c})")?;
                continue;
            }
            let basis: Vec<String> = idx.iter().map(|&i| format!("{prefix}{}", self.ctx.name(i))).collect();
            write!(f, "({c}) {}", basis.join("∧"))?;
        }
        Ok(())
    }
}

/// A differential `k`-form with polynomial coefficients.
#[derive(Clone, PartialEq)]
pub struct DiffForm<K: Scalar>(Blades<K>);

impl<K: Scalar> DiffForm<K> {
    pub fn zero(ctx: &Arc<VariableContext>, degree: usize) -> Self {
        DiffForm(Blades::zero(ctx, degree))
    }

    /// The 0-form `f`.
    pub fn function(f: &Polynomial<K>) -> Self {
        let mut b = Blades::zero(f.context(), 0);
        b.add_term(Vec::new(), f.clone());
        DiffForm(b)
    }

    /// The 1-form `Σ a_i dx_i`.
    pub fn one_form(coefficients: Vec<Polynomial<K>>) -> Result<Self> {
        let first = coefficients.first().ok_or(Error::Empty("form coefficient"))?;
        let ctx = first.context().clone();
        check_envelope(&ctx)?;
        if coefficients.len() != ctx.arity() {
            return Err(Error::ArityMismatch {
                object: "1-form".into(),
                expected: ctx.arity(),
                got: coefficients.len(),
            });
        }
        let mut b = Blades::zero(&ctx, 1);
        for (i, c) in coefficients.into_iter().enumerate() {
            check_same(&ctx, c.context())?;
            b.add_term(vec![i], c);
        }
        Ok(DiffForm(b))
    }

    /// The basis covector `dx_i`.
    pub fn basis(ctx: &Arc<VariableContext>, i: usize) -> Result<Self> {
        let mut coeffs = vec![Polynomial::zero(ctx); ctx.arity()];
        *coeffs.get_mut(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: ctx.arity(),
        })? = Polynomial::one(ctx);
        Self::one_form(coeffs)
    }

    /// Builds a `k`-form from `(index tuple, coefficient)` pairs. Tuples
    /// need not be sorted; repeated indices give zero.
    pub fn from_terms(
        ctx: &Arc<VariableContext>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Polynomial<K>)>,
    ) -> Result<Self> {
        check_envelope(ctx)?;
        let mut b = Blades::zero(ctx, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::WrongDegree {
                    expected: degree,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= ctx.arity()) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    arity: ctx.arity(),
                });
            }
            check_same(ctx, c.context())?;
            // sort by repeated single-index merges to track the sign
            let mut sorted: Vec<usize> = Vec::new();
            let mut negative = false;
            let mut vanished = false;
            for i in idx {
                match merge_indices(&sorted, &[i]) {
                    Some((m, s)) => {
                        sorted = m;
                        negative ^= s;
                    }
                    None => {
                        vanished = true;
                        break;
                    }
                }
            }
            if !vanished {
                b.add_term(sorted, if negative { -c } else { c });
            }
        }
        Ok(DiffForm(b))
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.0.ctx
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Coefficient of `dx_{i_1} ∧ ... ∧ dx_{i_k}` for an increasing tuple.
    pub fn coefficient(&self, idx: &[usize]) -> Polynomial<K> {
        self.0
            .coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.context()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Polynomial<K>)> {
        self.0.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficients of a 1-form as a dense vector.
    pub fn one_form_coefficients(&self) -> Result<Vec<Polynomial<K>>> {
        if self.degree() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                got: self.degree(),
            });
        }
        Ok((0..self.context().arity()).map(|i| self.coefficient(&[i])).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_same(self.context(), other.context())?;
        if self.degree() != other.degree() {
            return Err(Error::WrongDegree {
                expected: self.degree(),
                got: other.degree(),
            });
        }
        let mut out = self.0.clone();
        for (idx, c) in &other.0.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(DiffForm(out))
    }

    pub fn neg(&self) -> Self {
        let mut out = Blades::zero(self.context(), self.degree());
        for (idx, c) in &self.0.coeffs {
            out.add_term(idx.clone(), -c);
        }
        DiffForm(out)
    }

    pub fn scale(&self, f: &Polynomial<K>) -> Self {
        let mut out = Blades::zero(self.context(), self.degree());
        for (idx, c) in &self.0.coeffs {
            out.add_term(idx.clone(), c * f);
        }
        DiffForm(out)
    }

    /// Graded-antisymmetric exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        Ok(DiffForm(self.0.wedge(&other.0)?))
    }

    /// Exterior derivative `d`.
    pub fn exterior_derivative(&self) -> Self {
        let ctx = self.context().clone();
        let mut out = Blades::zero(&ctx, self.degree() + 1);
        for (idx, c) in &self.0.coeffs {
            for k in 0..ctx.arity() {
                if let Some((merged, negative)) = merge_indices(&[k], idx) {
                    let dc = c.d(k);
                    out.add_term(merged, if negative { -dc } else { dc });
                }
            }
        }
        DiffForm(out)
    }

    /// Contraction `ι_X ω` in the first slot.
    pub fn interior_product(&self, x: &VectorField<K>) -> Result<Self> {
        check_same(self.context(), x.context())?;
        if self.degree() == 0 {
            return Err(Error::WrongDegree { expected: 1, got: 0 });
        }
        let mut out = Blades::zero(self.context(), self.degree() - 1);
        for (idx, c) in &self.0.coeffs {
            for (s, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(s);
                let t = c * &x.components[i];
                out.add_term(rest, if s % 2 == 1 { -t } else { t });
            }
        }
        Ok(DiffForm(out))
    }

    /// For a 0-form, its function.
    pub fn as_function(&self) -> Option<Polynomial<K>> {
        (self.degree() == 0).then(|| self.coefficient(&[]))
    }
}

impl<K: Scalar> fmt::Display for DiffForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "d")
    }
}

impl<K: Scalar> fmt::Debug for DiffForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm[{}]({self})", self.degree())
    }
}

/// `d f`.
pub fn differential<K: Scalar>(f: &Polynomial<K>) -> DiffForm<K> {
    DiffForm::function(f).exterior_derivative()
}

/// A polynomial vector field `Σ X_i ∂/∂x_i`.
#[derive(Clone, PartialEq)]
pub struct VectorField<K: Scalar> {
    ctx: Arc<VariableContext>,
    components: Vec<Polynomial<K>>,
}

impl<K: Scalar> VectorField<K> {
    pub fn new(components: Vec<Polynomial<K>>) -> Result<Self> {
        let ctx = components
            .first()
            .ok_or(Error::Empty("vector field component"))?
            .context()
            .clone();
        check_envelope(&ctx)?;
        if components.len() != ctx.arity() {
            return Err(Error::ArityMismatch {
                object: "vector field".into(),
                expected: ctx.arity(),
                got: components.len(),
            });
        }
        for c in &components {
            check_same(&ctx, c.context())?;
        }
        Ok(VectorField { ctx, components })
    }

    /// The coordinate field `∂/∂x_i`.
    pub fn coordinate(ctx: &Arc<VariableContext>, i: usize) -> Result<Self> {
        let mut comps = vec![Polynomial::zero(ctx); ctx.arity()];
        *comps.get_mut(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: ctx.arity(),
        })? = Polynomial::one(ctx);
        Self::new(comps)
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn components(&self) -> &[Polynomial<K>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// The derivation `X(f) = Σ X_i ∂f/∂x_i`.
    pub fn apply(&self, f: &Polynomial<K>) -> Result<Polynomial<K>> {
        check_same(&self.ctx, f.context())?;
        Ok(self
            .components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(&self.ctx), |acc, (i, xi)| &acc + &(xi * &f.d(i))))
    }

    /// Lie bracket `[X, Y]_i = X(Y_i) - Y(X_i)`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        let mut comps = Vec::with_capacity(self.components.len());
        for (xi, yi) in self.components.iter().zip(&other.components) {
            comps.push(&self.apply(yi)? - &other.apply(xi)?);
        }
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components: comps,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.ctx, &other.ctx)?;
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, f: &Polynomial<K>) -> Self {
        VectorField {
            ctx: self.ctx.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn to_multivector(&self) -> Multivector<K> {
        let mut b = Blades::zero(&self.ctx, 1);
        for (i, c) in self.components.iter().enumerate() {
            b.add_term(vec![i], c.clone());
        }
        Multivector(b)
    }
}

impl<K: Scalar> fmt::Display for VectorField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_multivector().fmt(f)
    }
}

impl<K: Scalar> fmt::Debug for VectorField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

/// A polynomial `k`-vector field, `Σ c_I ∂_{i_1} ∧ ... ∧ ∂_{i_k}`.
#[derive(Clone, PartialEq)]
pub struct Multivector<K: Scalar>(Blades<K>);

impl<K: Scalar> Multivector<K> {
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        Ok(Multivector(self.0.wedge(&other.0)?))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coefficient(&self, idx: &[usize]) -> Polynomial<K> {
        self.0
            .coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.0.ctx))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Polynomial<K>)> {
        self.0.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }
}

impl<K: Scalar> fmt::Display for Multivector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, "∂")
    }
}

impl<K: Scalar> fmt::Debug for Multivector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}]({self})", self.degree())
    }
}

/// Wedge of a nonempty list of forms.
pub fn wedge_all<K: Scalar>(forms: &[&DiffForm<K>]) -> Result<DiffForm<K>> {
    let (first, rest) = forms.split_first().ok_or(Error::Empty("form"))?;
    rest.iter().try_fold((*first).clone(), |acc, f| acc.wedge(f))
}

/// Residual of the integrability condition for one form of a system.
#[derive(Debug, Clone)]
pub struct FrobeniusResidual<K: Scalar> {
    /// 0-based position of `ω_j` in the system.
    pub index: usize,
    /// `dω_j ∧ ω_1 ∧ ... ω̂_j ... ∧ ω_q`.
    pub residual: DiffForm<K>,
}

impl<K: Scalar> FrobeniusResidual<K> {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Checks `dω_j ∧ ω_1 ∧ … ω̂_j … ∧ ω_q = 0` for every `j`. A single form
/// is tested as `dω ∧ ω`.
pub fn frobenius_check<K: Scalar>(forms: &[DiffForm<K>]) -> Result<Vec<FrobeniusResidual<K>>> {
    if forms.is_empty() {
        return Err(Error::Empty("1-form"));
    }
    for w in forms {
        if w.degree() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                got: w.degree(),
            });
        }
        check_same(forms[0].context(), w.context())?;
    }
    let mut out = Vec::with_capacity(forms.len());
    if forms.len() == 1 {
        let residual = forms[0].exterior_derivative().wedge(&forms[0])?;
        out.push(FrobeniusResidual { index: 0, residual });
        return Ok(out);
    }
    for j in 0..forms.len() {
        let mut residual = forms[j].exterior_derivative();
        for (i, w) in forms.iter().enumerate() {
            if i != j {
                residual = residual.wedge(w)?;
            }
        }
        out.push(FrobeniusResidual { index: j, residual });
    }
    Ok(out)
}

/// Outcome of the involutivity test.
#[derive(Debug, Clone)]
pub struct InvolutivityReport<K: Scalar> {
    /// The decision rule applied.
    pub criterion: &'static str,
    /// First nonzero `([X_i, X_j] ∧ X_1 ∧ ... ∧ X_k)` with its 0-based pair.
    pub first_failure: Option<(usize, usize, Multivector<K>)>,
}

impl<K: Scalar> InvolutivityReport<K> {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub const INVOLUTIVITY_CRITERION: &str =
    "[X_i,X_j] ∧ X_1 ∧ … ∧ X_k ≡ 0 for all i<j (exact on the open set of maximal rank)";

/// Involutivity of the distribution spanned by `fields`, decided by the wedge criterion.
pub fn involutivity_check<K: Scalar>(fields: &[VectorField<K>]) -> Result<InvolutivityReport<K>> {
    let first = fields.first().ok_or(Error::Empty("vector field"))?;
    for x in fields {
        check_same(first.context(), x.context())?;
    }
    let span = fields
        .iter()
        .skip(1)
        .try_fold(first.to_multivector(), |acc, x| acc.wedge(&x.to_multivector()))?;
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let residual = fields[i].lie_bracket(&fields[j])?.to_multivector().wedge(&span)?;
            if !residual.is_zero() {
                return Ok(InvolutivityReport {
                    criterion: INVOLUTIVITY_CRITERION,
                    first_failure: Some((i, j, residual)),
                });
            }
        }
    }
    Ok(InvolutivityReport {
        criterion: INVOLUTIVITY_CRITERION,
        first_failure: None,
    })
}

/// Matrix of `df_k(X^λ)`, rows indexed by components, columns by fields.
#[derive(Debug, Clone)]
pub struct FirstIntegralMatrix<K: Scalar> {
    pub residuals: Vec<Vec<Polynomial<K>>>,
}

impl<K: Scalar> FirstIntegralMatrix<K> {
    pub fn holds(&self) -> bool {
        self.residuals.iter().flatten().all(Polynomial::is_zero)
    }

    /// Nonzero entries as `(component, field, residual)`, 0-based.
    pub fn failures(&self) -> impl Iterator<Item = (usize, usize, &Polynomial<K>)> {
        self.residuals.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(move |(l, r)| (k, l, r))
        })
    }
}

/// Evaluates `df_k(X^λ)` for every component and field.
pub fn first_integral_check<K: Scalar>(map: &PolyMap<K>, fields: &[VectorField<K>]) -> Result<FirstIntegralMatrix<K>> {
    let mut residuals = Vec::with_capacity(map.len());
    for f in map.components() {
        let df = differential(f);
        let mut row = Vec::with_capacity(fields.len());
        for x in fields {
            let r = df.interior_product(x)?;
            row.push(r.as_function().expect("contraction of a 1-form is a function"));
        }
        residuals.push(row);
    }
    Ok(FirstIntegralMatrix { residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_polynomial, Poly, Rational};

    fn ctx(names: &[&str]) -> Arc<VariableContext> {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn p(c: &Arc<VariableContext>, s: &str) -> Poly {
        parse_polynomial(s, c).unwrap()
    }

    fn field(c: &Arc<VariableContext>, comps: &[&str]) -> VectorField<num_rational::BigRational> {
        VectorField::new(comps.iter().map(|s| p(c, s)).collect()).unwrap()
    }

    fn form(c: &Arc<VariableContext>, comps: &[&str]) -> DiffForm<num_rational::BigRational> {
        DiffForm::one_form(comps.iter().map(|s| p(c, s)).collect()).unwrap()
    }

    #[test]
    fn wedge_dx1_df2() {
        let c = VariableContext::numbered(4);
        let f2 = p(&c, "3*x1^2*x2 + x2^3 + x3^2 + x4^2");
        let w = DiffForm::basis(&c, 0).unwrap().wedge(&differential(&f2)).unwrap();
        let expected = DiffForm::from_terms(
            &c,
            2,
            vec![
                (vec![0, 1], p(&c, "3*x1^2 + 3*x2^2")),
                (vec![0, 2], p(&c, "2*x3")),
                (vec![0, 3], p(&c, "2*x4")),
            ],
        )
        .unwrap();
        assert_eq!(w, expected);
        // f1 = x1, so this is also df1 ∧ df2
        assert_eq!(differential(&p(&c, "x1")).wedge(&differential(&f2)).unwrap(), expected);
    }

    #[test]
    fn wedge_antisymmetry() {
        let c = ctx(&["x", "y"]);
        let a = form(&c, &["x*y", "y^2 - 1"]);
        assert!(a.wedge(&a).unwrap().is_zero());
        let dx = DiffForm::<Rational>::basis(&c, 0).unwrap();
        let dy = DiffForm::basis(&c, 1).unwrap();
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
        let too_big = dx.wedge(&dy).unwrap().wedge(&dx).unwrap();
        assert!(too_big.is_zero());
        assert_eq!(too_big.degree(), 3);
    }

    #[test]
    fn exterior_derivative_examples() {
        let c = ctx(&["x", "y", "a", "b"]);
        let f = p(&c, "a^2*x - 2*a*b*y - b^2*x");
        assert_eq!(
            differential(&f),
            form(&c, &["a^2 - b^2", "-2*a*b", "2*a*x - 2*b*y", "-2*a*y - 2*b*x"])
        );
        assert!(differential(&f).exterior_derivative().is_zero());
        let c2 = ctx(&["x", "y"]);
        let x_dy = form(&c2, &["0", "x"]);
        let expected = DiffForm::from_terms(&c2, 2, vec![(vec![0, 1], p(&c2, "1"))]).unwrap();
        assert_eq!(x_dy.exterior_derivative(), expected);
    }

    #[test]
    fn from_terms_sorts_with_sign() {
        let c = ctx(&["x", "y", "z"]);
        let w = DiffForm::from_terms(&c, 2, vec![(vec![1, 0], p(&c, "z"))]).unwrap();
        assert_eq!(w.coefficient(&[0, 1]), p(&c, "-z"));
        let zero = DiffForm::from_terms(&c, 2, vec![(vec![1, 1], p(&c, "z"))]).unwrap();
        assert!(zero.is_zero());
        assert!(DiffForm::from_terms(&c, 2, vec![(vec![0], p(&c, "1"))]).is_err());
    }

    #[test]
    fn interior_product_examples() {
        let c = VariableContext::numbered(3);
        let f = p(&c, "x1^2 - x2^2 + x3^2");
        let x = field(&c, &["3*x2*x3^2 + x3", "x1*x3*(3*x3 - 2)", "-(2*x2 + 1)*x1"]);
        assert!(differential(&f)
            .interior_product(&x)
            .unwrap()
            .as_function()
            .unwrap()
            .is_zero());

        let d1 = VectorField::coordinate(&c, 0).unwrap();
        assert!(differential(&p(&c, "x2")).interior_product(&d1).unwrap().is_zero());

        let c2 = ctx(&["x", "y"]);
        let dxdy = DiffForm::basis(&c2, 0)
            .unwrap()
            .wedge(&DiffForm::basis(&c2, 1).unwrap())
            .unwrap();
        let dx_field = VectorField::coordinate(&c2, 0).unwrap();
        assert_eq!(
            dxdy.interior_product(&dx_field).unwrap(),
            DiffForm::basis(&c2, 1).unwrap()
        );
        assert!(DiffForm::function(&p(&c2, "x")).interior_product(&dx_field).is_err());
    }

    #[test]
    fn lie_bracket_examples() {
        let c = ctx(&["x", "y"]);
        let dx = VectorField::<Rational>::coordinate(&c, 0).unwrap();
        let dy = VectorField::coordinate(&c, 1).unwrap();
        assert!(dx.lie_bracket(&dy).unwrap().is_zero());
        let x_dy = field(&c, &["0", "x"]);
        let y_dx = field(&c, &["y", "0"]);
        assert_eq!(x_dy.lie_bracket(&y_dx).unwrap(), field(&c, &["x", "-y"]));
        assert!(x_dy.lie_bracket(&x_dy).unwrap().is_zero());
        assert!(dx
            .lie_bracket(&VectorField::coordinate(&VariableContext::numbered(3), 0).unwrap())
            .is_err());
    }

    #[test]
    fn frobenius_examples() {
        let c = VariableContext::numbered(8);
        let f1 = p(
            &c,
            "x7*x1^3 - 3*x7*x1*x2^2 + 3*x8*x1^2*x2 - x8*x2^3 + x5^3 - 3*x5*x6^2 + x4^2 - x3^2",
        );
        let r = frobenius_check(&[differential(&f1)]).unwrap();
        assert!(r[0].holds());
        assert_eq!(r[0].residual.degree(), 3);

        let c3 = ctx(&["x", "y", "z"]);
        let x_dy = form(&c3, &["0", "x", "0"]);
        assert!(frobenius_check(&[x_dy]).unwrap()[0].holds());

        let contact = form(&c3, &["z", "1", "0"]);
        let r = frobenius_check(&[contact]).unwrap();
        let expected = DiffForm::from_terms(&c3, 3, vec![(vec![2, 0, 1], p(&c3, "1"))]).unwrap();
        assert_eq!(r[0].residual, expected);
        assert_eq!(r[0].residual.coefficient(&[0, 1, 2]), p(&c3, "1"));

        assert!(frobenius_check::<num_rational::BigRational>(&[]).is_err());
    }

    #[test]
    fn frobenius_two_forms_uses_other_form() {
        let c = ctx(&["x", "y", "z", "w"]);
        let w1 = form(&c, &["1", "0", "0", "0"]);
        let w2 = form(&c, &["0", "1", "x", "0"]);
        let r = frobenius_check(&[w1, w2]).unwrap();
        assert!(r[0].holds());
        // dω2 = dx∧dz, wedge ω1 = dx gives zero as well
        assert!(r[1].holds());
        let w3 = form(&c, &["0", "1", "w", "0"]);
        let r = frobenius_check(&[form(&c, &["1", "0", "0", "0"]), w3]).unwrap();
        assert!(!r[1].holds());
    }

    #[test]
    fn involutivity_examples() {
        let c = ctx(&["x", "y", "z"]);
        let d1 = VectorField::coordinate(&c, 0).unwrap();
        let d2 = VectorField::coordinate(&c, 1).unwrap();
        assert!(involutivity_check(&[d1.clone(), d2]).unwrap().holds());

        let heis = field(&c, &["0", "1", "x"]);
        let rep = involutivity_check(&[d1.clone(), heis]).unwrap();
        let (i, j, residual) = rep.first_failure.clone().unwrap();
        assert_eq!((i, j), (0, 1));
        // ∂z ∧ ∂x ∧ (∂y + x ∂z) = ∂z∧∂x∧∂y = ∂x∧∂y∧∂z
        assert_eq!(residual.coefficient(&[0, 1, 2]), p(&c, "1"));
        assert!(rep.criterion.contains("[X_i,X_j]"));

        assert!(involutivity_check(&[field(&c, &["x*y", "z", "1"])]).unwrap().holds());
    }

    #[test]
    fn first_integral_examples() {
        let c = ctx(&["x", "y", "z", "u"]);
        let f1 = p(&c, "5*u^4*z - 10*u^2*z^3 + z^5 + x^2 - y^2");
        let x1 = field(&c, &["5/2*(z^4 - 6*z^2*u^2 + u^4)", "10*(z^3*u - z*u^3)", "-x", "-y"]);
        let m = first_integral_check(&PolyMap::new(vec![f1]).unwrap(), &[x1]).unwrap();
        assert!(m.holds());

        let c2 = VariableContext::numbered(2);
        let f = PolyMap::new(vec![p(&c2, "x1")]).unwrap();
        let d2 = VectorField::coordinate(&c2, 1).unwrap();
        assert!(first_integral_check(&f, &[d2]).unwrap().holds());

        let d1 = VectorField::coordinate(&c2, 0).unwrap();
        let m = first_integral_check(&f, &[d1]).unwrap();
        assert!(!m.holds());
        let fails: Vec<_> = m.failures().collect();
        assert_eq!(fails.len(), 1);
        assert_eq!(fails[0].2, &p(&c2, "1"));
    }

    #[test]
    fn envelope_enforced() {
        let c = VariableContext::numbered(17);
        let coeffs = vec![Poly::zero(&c); 17];
        assert!(matches!(DiffForm::one_form(coeffs), Err(Error::TooManyVariables(17))));
    }

    #[test]
    fn display() {
        let c = ctx(&["x", "y"]);
        let w = form(&c, &["2*x", "-y"]);
        assert_eq!(w.to_string(), "(2*x) dx + (-y) dy");
        assert_eq!(field(&c, &["1", "0"]).to_string(), "(1) ∂x");
        assert_eq!(DiffForm::<num_rational::BigRational>::zero(&c, 2).to_string(), "0");
    }
}
