use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, FieldError, QPoly, Scalar};

/// Element of `Q[t]/(m(t))`, stored as its reduced representative.
///
/// Constants do not need to know the modulus, which lets `zero()` and `one()`
/// exist without context. Any element of positive degree carries the modulus,
/// and binary operations adopt the modulus of whichever operand has one.
#[derive(Clone, Debug)]
pub struct NumberFieldElement {
    value: QPoly,
    modulus: Option<Arc<QPoly>>,
}

impl NumberFieldElement {
    pub fn new(value: QPoly, modulus: Arc<QPoly>) -> Self {
        let value = value.rem(&modulus);
        NumberFieldElement {
            value,
            modulus: Some(modulus),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        NumberFieldElement {
            value: QPoly::constant(c),
            modulus: None,
        }
    }

    /// The class of `t` in `Q[t]/(modulus)`.
    pub fn generator(modulus: Arc<QPoly>) -> Self {
        NumberFieldElement::new(QPoly::t(), modulus)
    }

    pub fn value(&self) -> &QPoly {
        &self.value
    }

    pub fn modulus(&self) -> Option<&Arc<QPoly>> {
        self.modulus.as_ref()
    }

    fn join_modulus(a: &Option<Arc<QPoly>>, b: &Option<Arc<QPoly>>) -> Option<Arc<QPoly>> {
        match (a, b) {
            (Some(m), _) | (None, Some(m)) => Some(m.clone()),
            (None, None) => None,
        }
    }

    fn with(value: QPoly, modulus: Option<Arc<QPoly>>) -> Self {
        match modulus {
            Some(m) => NumberFieldElement::new(value, m),
            None => {
                debug_assert!(
                    value.is_constant(),
                    "non-constant number-field element without modulus"
                );
                NumberFieldElement {
                    value,
                    modulus: None,
                }
            }
        }
    }
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for NumberFieldElement {}

impl Zero for NumberFieldElement {
    fn zero() -> Self {
        NumberFieldElement {
            value: QPoly::zero(),
            modulus: None,
        }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for NumberFieldElement {
    fn one() -> Self {
        NumberFieldElement::constant(BigRational::one())
    }
}

impl Neg for NumberFieldElement {
    type Output = Self;

    fn neg(self) -> Self {
        NumberFieldElement {
            value: self.value.neg(),
            modulus: self.modulus,
        }
    }
}

impl Add for NumberFieldElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for NumberFieldElement {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for NumberFieldElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Scalar for NumberFieldElement {
    fn inverse(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        if self.value.is_constant() {
            return Some(NumberFieldElement {
                value: QPoly::constant(self.value.coeff(0).recip()),
                modulus: self.modulus.clone(),
            });
        }
        let modulus = self.modulus.as_ref()?;
        let inv = self.value.inverse_mod(modulus)?;
        Some(NumberFieldElement::new(inv, modulus.clone()))
    }

    fn embed(poly: &QPoly, field: &Field) -> Result<Self, FieldError> {
        match field {
            Field::Rationals => {
                if poly.is_constant() {
                    Ok(NumberFieldElement::constant(poly.coeff(0)))
                } else {
                    Err(FieldError::ParameterOverRationals(poly.to_string()))
                }
            }
            Field::NumberField { modulus } => Ok(NumberFieldElement::new(
                poly.clone(),
                Arc::new(modulus.clone()),
            )),
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        NumberFieldElement::constant(q.clone())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let m = Self::join_modulus(&self.modulus, &other.modulus);
        NumberFieldElement::with(self.value.mul(&other.value), m)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let m = Self::join_modulus(&self.modulus, &other.modulus);
        NumberFieldElement {
            value: self.value.add(&other.value),
            modulus: m,
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let m = Self::join_modulus(&self.modulus, &other.modulus);
        NumberFieldElement {
            value: self.value.sub(&other.value),
            modulus: m,
        }
    }

    fn is_compound(&self) -> bool {
        self.value.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
