//! Exact scalars: the rationals and simple number fields `Q[t]/(m(t))`.
//!
//! Everything downstream is generic over [`Scalar`]. The rationals are
//! [`num_rational::BigRational`]; number-field elements are [`NumberFieldElement`],
//! which carry their modulus at runtime so the field can be chosen by an input file.

mod number_field;
mod poly;

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use number_field::NumberFieldElement;
pub use poly::QPoly;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("number-field modulus must be monic of degree >= 1, got {0}")]
    BadModulus(String),
    #[error("scalar {0} involves t, but the field is Q")]
    ParameterOverRationals(String),
}

/// The base field of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    /// `Q[t]/(modulus)`; the modulus is monic, of degree at least one, and assumed irreducible.
    NumberField {
        modulus: QPoly,
    },
}

impl Field {
    pub fn number_field(modulus: QPoly) -> Result<Self, FieldError> {
        match modulus.degree() {
            Some(d) if d >= 1 && modulus.is_monic() => Ok(Field::NumberField { modulus }),
            _ => Err(FieldError::BadModulus(modulus.to_string())),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, Field::Rationals)
    }
}

impl Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::NumberField { modulus } => write!(f, "Q[t]/({modulus})"),
        }
    }
}

/// An exact field element.
///
/// Arithmetic goes through owned operators plus the by-reference helpers below;
/// implementations override the helpers when they can avoid clones.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Embed a polynomial in the field parameter `t` into this scalar type.
    fn embed(poly: &QPoly, field: &Field) -> Result<Self, FieldError>;

    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    /// Whether the value needs parentheses when printed as a coefficient.
    fn is_compound(&self) -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn embed(poly: &QPoly, field: &Field) -> Result<Self, FieldError> {
        if !poly.is_constant() {
            return Err(FieldError::ParameterOverRationals(poly.to_string()));
        }
        debug_assert!(field.is_rationals() || poly.is_constant());
        Ok(poly.coeff(0))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}

/// Format a coefficient for use in front of a monomial: `""` for 1, `"-"` for -1.
pub(crate) fn coefficient_prefix<S: Scalar>(c: &S) -> String {
    if c.is_one() {
        String::new()
    } else if (-c.clone()).is_one() {
        "-".to_string()
    } else if c.is_compound() {
        format!("({c})*")
    } else {
        format!("{c}*")
    }
}
