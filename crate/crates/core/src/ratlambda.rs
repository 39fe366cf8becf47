//! The rational function field `Q(λ)`, the coefficient field of the generic
//! pencil member `p - λq`.

use num_rational::BigRational;

use crate::field::{ArithError, CoeffRepr, Field, Rationals};
use crate::upoly::UniPoly;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalFunctionField;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaFraction {
    num: UniPoly<Rationals>,
    den: UniPoly<Rationals>,
}

impl LambdaFraction {
    pub fn new(num: UniPoly<Rationals>, den: UniPoly<Rationals>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(LambdaFraction {
                num,
                den: UniPoly::one(Rationals),
            });
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?.expect("gcd divides");
        let den = den.div_exact(&g)?.expect("gcd divides");
        let lc = den.lc().unwrap().clone();
        Ok(LambdaFraction {
            num: num.scale(&lc.recip()),
            den: den.scale(&lc.recip()),
        })
    }

    pub fn from_poly(p: UniPoly<Rationals>) -> Self {
        LambdaFraction {
            num: p,
            den: UniPoly::one(Rationals),
        }
    }

    /// The transcendental `λ` itself.
    pub fn lambda() -> Self {
        LambdaFraction::from_poly(UniPoly::var(Rationals))
    }

    pub fn num(&self) -> &UniPoly<Rationals> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<Rationals> {
        &self.den
    }

    /// Value at `λ = x`; `None` where the denominator vanishes.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!num_traits::Zero::is_zero(&d)).then(|| self.num.eval(x) / d)
    }
}

impl Field for RationalFunctionField {
    type Elem = LambdaFraction;

    fn zero(&self) -> LambdaFraction {
        LambdaFraction::from_poly(UniPoly::zero(Rationals))
    }
    fn one(&self) -> LambdaFraction {
        LambdaFraction::from_poly(UniPoly::one(Rationals))
    }
    fn is_zero(&self, a: &LambdaFraction) -> bool {
        a.num.is_zero()
    }
    fn add(&self, a: &LambdaFraction, b: &LambdaFraction) -> LambdaFraction {
        if a.den == b.den {
            return LambdaFraction::new(a.num.add(&b.num), a.den.clone()).unwrap();
        }
        LambdaFraction::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den)).unwrap()
    }
    fn sub(&self, a: &LambdaFraction, b: &LambdaFraction) -> LambdaFraction {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &LambdaFraction, b: &LambdaFraction) -> LambdaFraction {
        LambdaFraction::new(a.num.mul(&b.num), a.den.mul(&b.den)).unwrap()
    }
    fn neg(&self, a: &LambdaFraction) -> LambdaFraction {
        LambdaFraction {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }
    fn inv(&self, a: &LambdaFraction) -> Result<LambdaFraction, ArithError> {
        if a.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        LambdaFraction::new(a.den.clone(), a.num.clone())
    }
    fn from_rational(&self, q: &BigRational) -> LambdaFraction {
        LambdaFraction::from_poly(UniPoly::constant(Rationals, q.clone()))
    }
    fn repr(&self, a: &LambdaFraction) -> CoeffRepr {
        if a.den.is_constant() && a.num.is_constant() {
            let c = a.num.coeff(0);
            return Rationals.repr(&c);
        }
        let text = if a.den.is_constant() {
            format!("({})", a.num.to_string_var("λ"))
        } else {
            format!(
                "({})/({})",
                a.num.to_string_var("λ"),
                a.den.to_string_var("λ")
            )
        };
        CoeffRepr {
            negative: false,
            unit: false,
            text,
        }
    }
}
