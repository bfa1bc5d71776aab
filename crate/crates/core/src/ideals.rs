//! Gröbner bases under graded reverse lexicographic order, normal forms,
//! Krull dimension and finite quotient algebras.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{check_same, Monomial, Polynomial, VariableContext};
use crate::scalar::ExactField;

/// Reduced Gröbner basis. Elements are monic and sorted by leading monomial.
#[derive(Clone, PartialEq)]
pub struct GroebnerBasis<K: ExactField> {
    ctx: Arc<VariableContext>,
    elements: Vec<Polynomial<K>>,
}

impl<K: ExactField> GroebnerBasis<K> {
    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn elements(&self) -> &[Polynomial<K>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements
            .iter()
            .any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.elements.iter().filter_map(Polynomial::leading_monomial).collect()
    }

    /// Always true: this type only holds fully reduced bases.
    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn contains(&self, p: &Polynomial<K>) -> bool {
        normal_form(p, self).is_zero()
    }
}

impl<K: ExactField> fmt::Debug for GroebnerBasis<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.elements.iter().map(|g| g.to_string()))
            .finish()
    }
}

/// Full reduction of `p` by `basis` (any order of divisors).
fn reduce<K: ExactField>(p: &Polynomial<K>, basis: &[&Polynomial<K>]) -> Polynomial<K> {
    let mut rest = p.clone();
    let mut remainder = Polynomial::zero(p.context());
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis.iter().find_map(|g| {
            let (lm, lc) = g.leading_term()?;
            m.quotient_of(lm).map(|q| (q, lc.clone(), *g))
        });
        match divisor {
            Some((q, lc, g)) => {
                let factor = -(c / lc);
                rest.add_scaled_shifted(&factor, &q, g);
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                remainder.add_term(m, c);
            }
        }
    }
    remainder
}

fn s_polynomial<K: ExactField>(f: &Polynomial<K>, g: &Polynomial<K>) -> Polynomial<K> {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let mut s = Polynomial::zero(f.context());
    s.add_scaled_shifted(&(K::one() / fc.clone()), &l.quotient_of(fm).expect("divides"), f);
    s.add_scaled_shifted(&(-(K::one() / gc.clone())), &l.quotient_of(gm).expect("divides"), g);
    s
}

#[derive(Clone)]
struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

struct Buchberger<K> {
    polys: Vec<Polynomial<K>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<K: ExactField> Buchberger<K> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i]
            .leading_monomial()
            .expect("stored polynomials are nonzero")
    }

    fn active_refs(&self) -> Vec<&Polynomial<K>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Inserts a new monic element and updates the pair set with the
    /// Gebauer–Möller criteria.
    fn update(&mut self, h: Polynomial<K>) {
        let hi = self.polys.len();
        self.polys.push(h);
        self.active.push(true);
        let lh = self.lm(hi).clone();

        let candidates: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| Pair {
                lcm: self.lm(g).lcm(&lh),
                i: g,
                j: hi,
            })
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        for (k, pr) in candidates.iter().enumerate() {
            let coprime = self.lm(pr.i).is_coprime(&lh);
            let dominated = candidates
                .iter()
                .enumerate()
                .any(|(k2, q)| k2 != k && q.lcm.divides(&pr.lcm) && (q.lcm != pr.lcm || k2 < k))
                || kept.iter().any(|q| q.lcm.divides(&pr.lcm));
            if coprime || !dominated {
                kept.push(pr.clone());
            }
        }
        // product criterion
        kept.retain(|pr| !self.lm(pr.i).is_coprime(&lh));

        // old pairs made redundant by h
        let polys = &self.polys;
        let lm = |i: usize| polys[i].leading_monomial().expect("nonzero");
        self.pairs
            .retain(|pr| !(lh.divides(&pr.lcm) && lm(pr.i).lcm(&lh) != pr.lcm && lm(pr.j).lcm(&lh) != pr.lcm));
        self.pairs.extend(kept);

        for g in 0..hi {
            if self.active[g] && lh.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.cmp(&b.lcm).then((a.i, a.j).cmp(&(b.i, b.j))))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger<K: ExactField>(gens: &[Polynomial<K>]) -> Result<GroebnerBasis<K>> {
    let ctx = gens.first().ok_or(Error::Empty("generator"))?.context().clone();
    for g in gens {
        check_same(&ctx, g.context())?;
    }
    let mut state = Buchberger {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut inputs: Vec<Polynomial<K>> = gens.iter().filter(|g| !g.is_zero()).map(Polynomial::monic).collect();
    inputs.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    for g in inputs {
        let h = reduce(&g, &state.active_refs());
        if !h.is_zero() {
            if h.leading_monomial().is_some_and(Monomial::is_one) {
                return Ok(unit_basis(&ctx));
            }
            state.update(h.monic());
        }
    }
    while let Some(pr) = state.next_pair() {
        let s = s_polynomial(&state.polys[pr.i], &state.polys[pr.j]);
        let h = reduce(&s, &state.active_refs());
        if !h.is_zero() {
            if h.leading_monomial().is_some_and(Monomial::is_one) {
                return Ok(unit_basis(&ctx));
            }
            state.update(h.monic());
        }
    }
    Ok(interreduce(&ctx, state.active_refs()))
}

fn unit_basis<K: ExactField>(ctx: &Arc<VariableContext>) -> GroebnerBasis<K> {
    GroebnerBasis {
        ctx: ctx.clone(),
        elements: vec![Polynomial::one(ctx)],
    }
}

fn interreduce<K: ExactField>(ctx: &Arc<VariableContext>, basis: Vec<&Polynomial<K>>) -> GroebnerBasis<K> {
    // minimal basis: drop elements whose leading monomial is a multiple of another's
    let mut minimal: Vec<&Polynomial<K>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.leading_monomial().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(k2, h)| {
            let lh = h.leading_monomial().expect("nonzero");
            k2 != k && lh.divides(lg) && (lh != lg || k2 < k)
        });
        if !redundant {
            minimal.push(g);
        }
    }
    let mut elements: Vec<Polynomial<K>> = minimal
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let others: Vec<&Polynomial<K>> = minimal
                .iter()
                .enumerate()
                .filter(|&(k2, _)| k2 != k)
                .map(|(_, h)| *h)
                .collect();
            // leading term stays, so reducing the tail is enough
            let (lm, lc) = g.leading_term().expect("nonzero");
            let mut tail = (*g).clone();
            tail.add_term(lm.clone(), -lc.clone());
            let mut out = reduce(&tail, &others);
            out.add_term(lm.clone(), lc.clone());
            out.monic()
        })
        .collect();
    elements.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    GroebnerBasis {
        ctx: ctx.clone(),
        elements,
    }
}

/// Unique remainder of `p` modulo the basis.
pub fn normal_form<K: ExactField>(p: &Polynomial<K>, gb: &GroebnerBasis<K>) -> Polynomial<K> {
    let refs: Vec<&Polynomial<K>> = gb.elements.iter().collect();
    reduce(p, &refs)
}

/// Krull dimension and one maximal independent variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    /// `-1` for the unit ideal.
    pub dim: i64,
    /// Variables independent modulo the leading-term ideal, of size `dim`.
    pub independent: Vec<usize>,
}

/// Leading-term independent subsets of maximal size, in lexicographic order.
fn maximal_independent_sets(arity: usize, lms: &[&Monomial]) -> (i64, Vec<Vec<usize>>) {
    if lms.iter().any(|m| m.is_one()) {
        return (-1, Vec::new());
    }
    let supports: Vec<u32> = lms
        .iter()
        .map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = -1i64;
    let mut sets: Vec<u32> = Vec::new();
    for mask in 0u32..(1u32 << arity) {
        // S independent iff no leading monomial is supported inside S
        if supports.iter().any(|&s| s & !mask == 0) {
            continue;
        }
        let size = i64::from(mask.count_ones());
        if size > best {
            best = size;
            sets.clear();
        }
        if size == best {
            sets.push(mask);
        }
    }
    let mut out: Vec<Vec<usize>> = sets
        .into_iter()
        .map(|m| (0..arity).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    (best, out)
}

pub fn ideal_dimension<K: ExactField>(gb: &GroebnerBasis<K>) -> Dimension {
    let (dim, sets) = maximal_independent_sets(gb.ctx.arity(), &gb.leading_monomials());
    Dimension {
        dim,
        independent: sets.into_iter().next().unwrap_or_default(),
    }
}

/// `R[x]/I` for a zero-dimensional ideal, presented by standard monomials.
#[derive(Clone)]
pub struct QuotientAlgebra<K: ExactField> {
    gb: GroebnerBasis<K>,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl<K: ExactField> QuotientAlgebra<K> {
    pub fn groebner_basis(&self) -> &GroebnerBasis<K> {
        &self.gb
    }

    /// Standard monomials in increasing graded reverse lexicographic order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce(&self, p: &Polynomial<K>) -> Polynomial<K> {
        normal_form(p, &self.gb)
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of the class of `p` in the monomial basis.
    pub fn coordinates(&self, p: &Polynomial<K>) -> Vec<K> {
        let nf = self.reduce(p);
        let mut out = vec![K::zero(); self.dim()];
        for (m, c) in nf.terms() {
            let k = self.index[m];
            out[k] = c.clone();
        }
        out
    }

    /// Normal form of `a * b`.
    pub fn multiply(&self, a: &Polynomial<K>, b: &Polynomial<K>) -> Polynomial<K> {
        self.reduce(&(a * b))
    }

    /// Normal form of the product of two basis monomials.
    pub fn basis_product(&self, i: usize, j: usize) -> Polynomial<K> {
        let m = self.basis[i].mul(&self.basis[j]);
        self.reduce(&Polynomial::monomial(&self.gb.ctx, m, K::one()))
    }
}

impl<K: ExactField> fmt::Debug for QuotientAlgebra<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.basis.iter().map(|m| m.format_with(&self.gb.ctx)).collect();
        write!(f, "QuotientAlgebra(dim {}, basis {names:?})", self.dim())
    }
}

pub fn quotient_algebra<K: ExactField>(gb: &GroebnerBasis<K>) -> Result<QuotientAlgebra<K>> {
    let d = ideal_dimension(gb);
    if d.dim > 0 {
        return Err(Error::NotZeroDimensional(d.dim));
    }
    let n = gb.ctx.arity();
    let lms: Vec<Monomial> = gb.leading_monomials().into_iter().cloned().collect();
    let standard = |m: &Monomial| !lms.iter().any(|l| l.divides(m));
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut queue: VecDeque<Monomial> = VecDeque::new();
    let one = Monomial::one(n);
    if standard(&one) {
        seen.insert(one.clone());
        queue.push_back(one);
    }
    while let Some(m) = queue.pop_front() {
        for i in 0..n {
            let next = m.mul(&Monomial::var(n, i));
            if standard(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let basis: Vec<Monomial> = seen.into_iter().collect();
    let index = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    Ok(QuotientAlgebra {
        gb: gb.clone(),
        basis,
        index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilnorNumber {
    Finite(usize),
    Infinite,
}

impl fmt::Display for MilnorNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilnorNumber::Finite(m) => write!(f, "{m}"),
            MilnorNumber::Infinite => f.write_str("infinite"),
        }
    }
}

/// Gradient ideal of `f` with its reduced basis.
pub fn jacobian_basis<K: ExactField>(f: &Polynomial<K>) -> Result<GroebnerBasis<K>> {
    buchberger(&f.gradient())
}

/// `dim R[x]/(∂f/∂x_1, ..., ∂f/∂x_n)`, or infinite when that ideal is
/// positive-dimensional.
pub fn milnor_number<K: ExactField>(f: &Polynomial<K>) -> Result<MilnorNumber> {
    let gb = jacobian_basis(f)?;
    match quotient_algebra(&gb) {
        Ok(q) => Ok(MilnorNumber::Finite(q.dim())),
        Err(Error::NotZeroDimensional(_)) => Ok(MilnorNumber::Infinite),
        Err(e) => Err(e),
    }
}

/// True when the ideal is zero-dimensional and every variable is nilpotent
/// modulo it, i.e. the origin is its only complex zero. The quotient is
/// then the local algebra at the origin.
pub fn origin_is_only_zero<K: ExactField>(gb: &GroebnerBasis<K>) -> Result<bool> {
    if gb.is_unit() {
        return Ok(false);
    }
    let q = match quotient_algebra(gb) {
        Ok(q) => q,
        Err(Error::NotZeroDimensional(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let dim = u32::try_from(q.dim()).map_err(|_| Error::Unsupported("quotient too large".into()))?;
    let n = gb.ctx.arity();
    Ok((0..n).all(|i| {
        let power = Polynomial::monomial(&gb.ctx, Monomial::var(n, i), K::one()).pow(dim);
        normal_form(&power, gb).is_zero()
    }))
}

/// Bounds on the real dimension of the real zero set of an ideal.
#[derive(Debug, Clone)]
pub struct RealDimension<K: ExactField> {
    /// Krull dimension of the ideal itself (complex dimension).
    pub complex_dim: i64,
    /// Krull dimension after adding polynomials vanishing on the real locus.
    pub upper: i64,
    /// Largest coordinate subspace on which every generator vanishes.
    pub lower: Option<i64>,
    /// Variables spanning that subspace.
    pub subspace: Vec<usize>,
    /// Reduced basis of the refined ideal.
    pub refined: GroebnerBasis<K>,
}

impl<K: ExactField> RealDimension<K> {
    /// The real dimension when both bounds meet.
    pub fn exact(&self) -> Option<i64> {
        (self.lower == Some(self.upper)).then_some(self.upper)
    }
}

/// Monomials whose vanishing is forced on the real zero set by `g`.
fn real_consequences<K: ExactField + crate::scalar::OrderedField>(g: &Polynomial<K>) -> Vec<Monomial> {
    if g.num_terms() == 1 {
        let (m, _) = g.leading_term().expect("nonzero");
        let r = m.radical();
        return if &r == m { Vec::new() } else { vec![r] };
    }
    let mut signs = g.terms().map(|(_, c)| c.is_positive());
    let first = signs.next();
    let same_sign = signs.all(|s| Some(s) == first);
    if same_sign && g.terms().all(|(m, _)| m.all_even()) {
        // a sum of squares of monomials with like signs: each monomial vanishes
        return g.terms().map(|(m, _)| m.half()).collect();
    }
    Vec::new()
}

/// Real-dimension bounds for the zero set of `gens` over the reals.
///
/// The upper bound saturates the ideal with two rules that keep the real
/// zero set unchanged: a generator that is a like-signed combination of
/// even monomials forces each half-monomial to vanish, and a monomial
/// forces its radical to vanish. The lower bound looks for a coordinate
/// subspace contained in the zero set.
pub fn real_dimension<K: ExactField + crate::scalar::OrderedField>(gens: &[Polynomial<K>]) -> Result<RealDimension<K>> {
    let ctx = gens.first().ok_or(Error::Empty("generator"))?.context().clone();
    let n = ctx.arity();
    if n > 24 {
        return Err(Error::TooManyVariables(n));
    }
    let original = buchberger(gens)?;
    let complex_dim = ideal_dimension(&original).dim;

    let mut current: Vec<Polynomial<K>> = gens.to_vec();
    let mut gb = original.clone();
    // Σ g² lies in the ideal and vanishes exactly on the real zero set
    let mut extra = Vec::new();
    if gens.len() > 1 && gens.iter().map(|g| g.num_terms().pow(2)).sum::<usize>() <= 100_000 {
        let mut sos = Polynomial::zero(&ctx);
        for g in gens {
            sos = &sos + &(g * g);
        }
        extra.push(sos);
    }
    loop {
        let mut added = Vec::new();
        let pending = std::mem::take(&mut extra);
        for g in current.iter().chain(gb.elements()).chain(&pending) {
            for m in real_consequences(g) {
                let mp = Polynomial::monomial(&ctx, m, K::one());
                if !gb.contains(&mp) && !added.contains(&mp) {
                    added.push(mp);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        current.extend(added);
        gb = buchberger(&current)?;
    }
    let upper = ideal_dimension(&gb).dim;

    let mut lower: Option<i64> = None;
    let mut subspace = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let size = i64::from(mask.count_ones());
        if lower.is_some_and(|l| l >= size) {
            continue;
        }
        let zeroed: Vec<bool> = (0..n).map(|i| mask & (1 << i) == 0).collect();
        if gens.iter().all(|g| g.restrict_to_zero(&zeroed).is_zero()) {
            lower = Some(size);
            subspace = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        }
    }
    Ok(RealDimension {
        complex_dim,
        upper,
        lower,
        subspace,
        refined: gb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_polynomial, Poly};

    fn ctx(names: &[&str]) -> Arc<VariableContext> {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn ps(c: &Arc<VariableContext>, items: &[&str]) -> Vec<Poly> {
        items.iter().map(|s| parse_polynomial(s, c).unwrap()).collect()
    }

    #[test]
    fn simple_bases() {
        let c = ctx(&["x", "y"]);
        let gb = buchberger(&ps(&c, &["x", "y"])).unwrap();
        assert_eq!(gb.elements(), ps(&c, &["y", "x"]).as_slice());

        let gb = buchberger(&ps(&c, &["x^2 - y^2", "x*y"])).unwrap();
        assert_eq!(gb.elements(), ps(&c, &["x*y", "x^2 - y^2", "y^3"]).as_slice());

        let h = ctx(&["x", "y", "z", "w"]);
        let gb = buchberger(&ps(&h, &["2*x", "2*y", "-2*z", "-2*w"])).unwrap();
        assert_eq!(gb.len(), 4);
        assert!(gb.elements().iter().all(|g| g.num_terms() == 1));
    }

    #[test]
    fn zero_and_unit_ideals() {
        let c = ctx(&["x", "y"]);
        assert!(buchberger(&ps(&c, &["0"])).unwrap().is_empty());
        let unit = buchberger(&ps(&c, &["x", "x + 1"])).unwrap();
        assert!(unit.is_unit());
        assert_eq!(ideal_dimension(&unit).dim, -1);
        assert!(normal_form(&ps(&c, &["x^3 + y"])[0], &unit).is_zero());
        assert!(buchberger::<crate::Rational>(&[]).is_err());
    }

    #[test]
    fn normal_forms() {
        let c = ctx(&["x", "y"]);
        let gb = buchberger(&ps(&c, &["x^2 - y^2", "x*y"])).unwrap();
        assert!(normal_form(&ps(&c, &["x^3"])[0], &gb).is_zero());
        let y2 = ps(&c, &["y^2"])[0].clone();
        assert_eq!(normal_form(&y2, &gb), y2);
        assert_eq!(normal_form(&ps(&c, &["x^2"])[0], &gb), y2);
    }

    #[test]
    fn dimensions() {
        let h = ctx(&["x", "y", "z", "w"]);
        assert_eq!(
            ideal_dimension(&buchberger(&ps(&h, &["x", "y", "z", "w"])).unwrap()).dim,
            0
        );
        let c3 = ctx(&["x", "y", "z"]);
        let d = ideal_dimension(&buchberger(&ps(&c3, &["x"])).unwrap());
        assert_eq!(d.dim, 2);
        assert_eq!(d.independent, vec![1, 2]);
        assert_eq!(ideal_dimension(&buchberger(&ps(&c3, &["0"])).unwrap()).dim, 3);
    }

    #[test]
    fn quotients() {
        let h = ctx(&["x", "y", "z", "w"]);
        let q = quotient_algebra(&buchberger(&ps(&h, &["x", "y", "z", "w"])).unwrap()).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.basis()[0].is_one());

        let c = ctx(&["x", "y"]);
        let q = quotient_algebra(&buchberger(&ps(&c, &["x^2 - y^2", "x*y"])).unwrap()).unwrap();
        let shown: Vec<String> = q.basis().iter().map(|m| m.format_with(&c)).collect();
        assert_eq!(shown, vec!["1", "y", "x", "y^2"]);
        assert_eq!(q.basis_product(1, 1), ps(&c, &["y^2"])[0]);

        let err = quotient_algebra(&buchberger(&ps(&c, &["x"])).unwrap()).unwrap_err();
        assert_eq!(err, Error::NotZeroDimensional(1));
    }

    #[test]
    fn milnor_numbers() {
        let h = ctx(&["x", "y", "z", "w"]);
        assert_eq!(
            milnor_number(&ps(&h, &["x^2+y^2-z^2-w^2"])[0]).unwrap(),
            MilnorNumber::Finite(1)
        );
        let c = ctx(&["x", "y"]);
        assert_eq!(
            milnor_number(&ps(&c, &["x^3 - 3*x*y^2"])[0]).unwrap(),
            MilnorNumber::Finite(4)
        );
        assert_eq!(milnor_number(&ps(&c, &["x^2"])[0]).unwrap(), MilnorNumber::Infinite);
    }

    #[test]
    fn origin_locality() {
        let c = ctx(&["x", "y"]);
        let gb = buchberger(&ps(&c, &["x^2 - y^2", "x*y"])).unwrap();
        assert!(origin_is_only_zero(&gb).unwrap());
        // x(x-1): zeros at 0 and 1
        let gb = buchberger(&ps(&c, &["x^2 - x", "y"])).unwrap();
        assert!(!origin_is_only_zero(&gb).unwrap());
    }

    #[test]
    fn real_dimension_bounds() {
        let c = ctx(&["x", "y", "z"]);
        // x^2 + y^2 = 0 is a line over the reals, a pair of planes over C
        let r = real_dimension(&ps(&c, &["x^2 + y^2"])).unwrap();
        assert_eq!(r.complex_dim, 2);
        assert_eq!(r.upper, 1);
        assert_eq!(r.exact(), Some(1));
        assert_eq!(r.subspace, vec![2]);

        let r = real_dimension(&ps(&c, &["x*y*z"])).unwrap();
        assert_eq!((r.complex_dim, r.upper, r.lower), (2, 2, Some(2)));
    }
}
