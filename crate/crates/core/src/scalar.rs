//! Coefficient types.
//!
//! Everything symbolic is generic over [`Scalar`]. Only [`ExactField`]
//! implementors may be used where zero tests decide mathematical facts
//! (Gröbner bases, Eisenbud–Levine signatures); floating point types are
//! accepted by the arithmetic layer and by the numerical oracles.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// A coefficient field usable by the polynomial layer.
pub trait Scalar: Clone + PartialEq + Debug + Display + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Lossy conversion used by numerical oracles.
    fn to_f64(&self) -> f64;
}

/// Fields whose equality is exact, so `is_zero` decides identities.
pub trait ExactField: Scalar {}

/// Fields carrying a total order compatible with the field operations.
pub trait OrderedField: Scalar + PartialOrd + Signed {}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerators/denominators: fall back to a ratio of floats.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

impl ExactField for BigRational {}
impl OrderedField for BigRational {}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_rational(q: &BigRational) -> Self {
                <$t as FromPrimitive>::from_f64(Scalar::to_f64(q)).unwrap_or(<$t as Float>::nan())
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl OrderedField for $t {}
    )*};
}

float_scalar!(f32, f64);

/// Builds an exact rational `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sign of a scalar as -1, 0 or 1.
pub fn sign_of<K: OrderedField>(x: &K) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
