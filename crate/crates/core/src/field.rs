//! Coefficient fields.
//!
//! Every polynomial type in this crate is parameterised by a *field object*
//! implementing [`Field`]; elements are plain values and all arithmetic goes
//! through the field object. This lets number-field elements share one
//! modulus without storing it in every coefficient.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::upoly::UniPoly;

/// Failure of a field operation.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    /// An inversion in `Q[t]/(m)` hit a zero divisor. The payload is the
    /// monic proper factor `gcd(residue, m)` of the modulus.
    #[error("zero divisor encountered, modulus factor {0}")]
    ZeroDivisor(UniPoly<Rationals>),
}

/// How a coefficient is rendered inside a polynomial.
pub struct CoeffRepr {
    pub negative: bool,
    pub unit: bool,
    pub text: String,
}

#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(n.into()))
    }

    /// Nonzero scalar that a coefficient list is divided by to keep
    /// remainder sequences small. The first entry is the leading coefficient.
    /// Over a number field this is the leading coefficient itself, so the
    /// call doubles as the zero-divisor probe of dynamic evaluation.
    fn normalizing_scalar(&self, coeffs: &[&Self::Elem]) -> Result<Self::Elem, ArithError> {
        match coeffs.first() {
            Some(lc) => {
                self.inv(lc)?;
                Ok((*lc).clone())
            }
            None => Err(ArithError::DivisionByZero),
        }
    }

    fn repr(&self, a: &Self::Elem) -> CoeffRepr;
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, ArithError> {
        if a.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn from_rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }

    /// Content: gcd of numerators over lcm of denominators, signed like the
    /// leading coefficient, so the quotient is a primitive integer list.
    fn normalizing_scalar(&self, coeffs: &[&BigRational]) -> Result<BigRational, ArithError> {
        let Some(lc) = coeffs.first() else {
            return Err(ArithError::DivisionByZero);
        };
        if lc.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if lc.is_negative() {
            num = -num;
        }
        Ok(BigRational::new(num, den))
    }

    fn repr(&self, a: &BigRational) -> CoeffRepr {
        let mag = a.abs();
        CoeffRepr {
            negative: a.is_negative(),
            unit: mag.is_one(),
            text: mag.to_string(),
        }
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
