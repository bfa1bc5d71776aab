//! Exact verification of harmonic first integral maps, local degrees of
//! gradient maps and Milnor fibration classification.
//!
//! The symbolic core is generic over the coefficient type (see [`scalar`]);
//! the aliases below fix it to exact rationals, which is what every
//! decision procedure in this crate uses.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod exterior;
pub mod harmonic;
pub mod ideals;
pub mod local_degree;
pub mod map;
pub mod numeric;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod problem;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use parse::{parse_polynomial, parse_polynomial_in};
pub use poly::{Homogeneity, Monomial, Polynomial, VariableContext};
pub use scalar::{rat, ExactField, OrderedField, Scalar};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Polynomial with exact rational coefficients.
pub type Poly = Polynomial<Rational>;
/// Polynomial with `f64` coefficients, for the numerical oracles.
pub type PolyF64 = Polynomial<f64>;
/// Polynomial with `f32` coefficients.
pub type PolyF32 = Polynomial<f32>;
pub type Map = map::PolyMap<Rational>;
pub type MapF64 = map::PolyMap<f64>;
pub type Form = exterior::DiffForm<Rational>;
pub type Field = exterior::VectorField<Rational>;
pub type Basis = ideals::GroebnerBasis<Rational>;
pub type Quotient = ideals::QuotientAlgebra<Rational>;
