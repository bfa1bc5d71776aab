use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{check_same, Polynomial, VariableContext};
use crate::scalar::Scalar;

/// An ordered tuple `(f_1, ..., f_p)` of polynomials on a shared context.
#[derive(Clone, PartialEq)]
pub struct PolyMap<K: Scalar> {
    ctx: Arc<VariableContext>,
    components: Vec<Polynomial<K>>,
}

impl<K: Scalar> PolyMap<K> {
    pub fn new(components: Vec<Polynomial<K>>) -> Result<Self> {
        let first = components.first().ok_or(Error::Empty("map component"))?;
        let ctx = first.context().clone();
        for c in &components {
            check_same(&ctx, c.context())?;
        }
        Ok(PolyMap { ctx, components })
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.ctx.arity()
    }

    /// Number of components `p`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial<K>] {
        &self.components
    }

    /// Component by 1-based index.
    pub fn component(&self, k: usize) -> Result<&Polynomial<K>> {
        if k == 0 || k > self.len() {
            return Err(Error::NoSuchComponent {
                index: k,
                count: self.len(),
            });
        }
        Ok(&self.components[k - 1])
    }

    /// The truncation `(f_1, ..., f_j)`.
    pub fn truncate(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.len() {
            return Err(Error::NoSuchComponent {
                index: j,
                count: self.len(),
            });
        }
        Ok(PolyMap {
            ctx: self.ctx.clone(),
            components: self.components[..j].to_vec(),
        })
    }

    /// Jacobian rows `df_alpha`, entry `[alpha][i] = d f_alpha / d x_i`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial<K>>> {
        self.components.iter().map(Polynomial::gradient).collect()
    }

    /// `A * F` for a constant `p x p` matrix `A` acting on the target.
    pub fn compose_linear(&self, matrix: &[Vec<K>]) -> Result<Self> {
        if matrix.len() != self.len() || matrix.iter().any(|r| r.len() != self.len()) {
            return Err(Error::ArityMismatch {
                object: "target transformation".into(),
                expected: self.len(),
                got: matrix.len(),
            });
        }
        let components = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.components)
                    .fold(Polynomial::zero(&self.ctx), |acc, (a, f)| &acc + &f.scale(a))
            })
            .collect();
        Ok(PolyMap {
            ctx: self.ctx.clone(),
            components,
        })
    }

    pub fn scale(&self, c: &K) -> Self {
        PolyMap {
            ctx: self.ctx.clone(),
            components: self.components.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn evaluate(&self, point: &[K]) -> Result<Vec<K>> {
        self.components.iter().map(|f| f.evaluate(point)).collect()
    }
}

impl<K: Scalar> fmt::Debug for PolyMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.components.iter().map(|c| c.to_string()))
            .finish()
    }
}

impl<K: Scalar> fmt::Display for PolyMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
