//! Arithmetic in `Q[t]/(m)` for a squarefree (not necessarily irreducible)
//! modulus `m`, with dynamic evaluation.
//!
//! `Q[t]/(m)` is a product of number fields. Every element with an
//! invertible residue behaves like a field element; when an inversion meets a
//! zero divisor the inversion fails with [`ArithError::ZeroDivisor`] carrying
//! a proper factor `g` of `m`, and [`split_run`] reruns the computation in
//! `Q[t]/(g)` and `Q[t]/(m/g)`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::field::{ArithError, CoeffRepr, Field, Rationals};
use crate::upoly::UniPoly;

/// Name used for the generator when rendering elements.
pub const GENERATOR: &str = "α";

#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    modulus: Arc<UniPoly<Rationals>>,
}

impl NumberField {
    /// Builds `Q[t]/(m)`; `m` is made monic and must be squarefree of degree
    /// at least one.
    pub fn new(modulus: UniPoly<Rationals>) -> Result<Self, Error> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        let m = modulus.monic()?;
        if !m.gcd(&m.derivative())?.is_constant() {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        Ok(NumberField {
            modulus: Arc::new(m),
        })
    }

    pub fn modulus(&self) -> &UniPoly<Rationals> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// The class of `t`.
    pub fn generator(&self) -> UniPoly<Rationals> {
        self.reduce(&UniPoly::var(Rationals))
    }

    pub fn reduce(&self, a: &UniPoly<Rationals>) -> UniPoly<Rationals> {
        a.rem(&self.modulus).expect("modulus is nonzero")
    }

    pub fn element(&self, residue: UniPoly<Rationals>) -> UniPoly<Rationals> {
        self.reduce(&residue)
    }
}

impl Field for NumberField {
    type Elem = UniPoly<Rationals>;

    fn zero(&self) -> Self::Elem {
        UniPoly::zero(Rationals)
    }
    fn one(&self) -> Self::Elem {
        UniPoly::one(Rationals)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.sub(b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return UniPoly::zero(Rationals);
        }
        if a.is_constant() {
            return b.scale(&a.coeffs()[0]);
        }
        if b.is_constant() {
            return a.scale(&b.coeffs()[0]);
        }
        self.reduce(&a.mul(b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg()
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError> {
        if a.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if a.is_constant() {
            return Ok(UniPoly::constant(Rationals, a.coeffs()[0].recip()));
        }
        let (g, s, _) = a.ext_gcd(&self.modulus)?;
        if g.is_constant() {
            Ok(self.reduce(&s))
        } else {
            Err(ArithError::ZeroDivisor(g))
        }
    }
    fn from_rational(&self, q: &BigRational) -> Self::Elem {
        UniPoly::constant(Rationals, q.clone())
    }
    fn repr(&self, a: &Self::Elem) -> CoeffRepr {
        if a.is_constant() {
            let c = a
                .coeffs()
                .first()
                .cloned()
                .unwrap_or_else(BigRational::zero);
            return Rationals.repr(&c);
        }
        CoeffRepr {
            negative: false,
            unit: false,
            text: format!("({})", a.to_string_var(GENERATOR)),
        }
    }
}

/// Runs `f` over `Q[t]/(modulus)`, splitting the modulus whenever `f` fails
/// with a zero divisor, and returns one result per final branch. Branches
/// are ordered by degree and then by their printed modulus.
pub fn split_run<T>(
    modulus: &UniPoly<Rationals>,
    mut f: impl FnMut(&NumberField) -> Result<T, ArithError>,
) -> Result<Vec<(NumberField, T)>, Error> {
    let mut work = vec![NumberField::new(modulus.clone())?];
    let mut done = Vec::new();
    while let Some(k) = work.pop() {
        match f(&k) {
            Ok(v) => done.push((k, v)),
            Err(ArithError::ZeroDivisor(g)) => {
                let m = k.modulus();
                let g = g.monic()?;
                let h = m
                    .div_exact(&g)?
                    .ok_or_else(|| Error::Internal(format!("{g} does not divide {m}")))?;
                if g.is_constant() || h.is_constant() {
                    return Err(Error::Internal(format!("improper split of {m} by {g}")));
                }
                work.push(NumberField::new(g)?);
                work.push(NumberField::new(h)?);
            }
            Err(e) => return Err(e.into()),
        }
    }
    done.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.modulus().to_string().cmp(&b.0.modulus().to_string()))
    });
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly<Rationals> {
        UniPoly::from_ints(c)
    }

    #[test]
    fn inverse_in_gaussian_rationals() {
        let k = NumberField::new(p(&[1, 0, 1])).unwrap();
        let t = k.generator();
        assert_eq!(k.inv(&t).unwrap(), p(&[0, -1]));
    }

    #[test]
    fn inverse_in_eisenstein_field() {
        // t * (-t - 1) = -t^2 - t = 1 mod t^2+t+1
        let k = NumberField::new(p(&[1, 1, 1])).unwrap();
        let y = k.inv(&k.generator()).unwrap();
        assert_eq!(y, p(&[-1, -1]));
        assert!(k.is_one(&k.mul(&y, &k.generator())));
    }

    #[test]
    fn zero_divisor_reports_factor() {
        let k = NumberField::new(p(&[-1, 0, 1])).unwrap();
        let x = p(&[-1, 1]);
        assert_eq!(k.inv(&x), Err(ArithError::ZeroDivisor(p(&[-1, 1]))));
    }

    #[test]
    fn non_squarefree_modulus_rejected() {
        assert!(NumberField::new(p(&[1, 2, 1])).is_err());
        assert!(NumberField::new(p(&[3])).is_err());
    }

    #[test]
    fn split_run_separates_branches() {
        // (t-1)(t-2)(t^2+1): invert t-1, which is a zero divisor on one branch
        let m = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[1, 0, 1]));
        let out = split_run(&m, |k| {
            let a = k.sub(&k.generator(), &k.one());
            match k.inv(&a) {
                Ok(_) => Ok(true),
                Err(ArithError::DivisionByZero) => Ok(false),
                Err(e) => Err(e),
            }
        })
        .unwrap();
        let moduli: Vec<String> = out.iter().map(|(k, _)| k.modulus().to_string()).collect();
        assert_eq!(moduli, vec!["t-1".to_string(), "t^3-2*t^2+t-2".to_string()]);
        assert!(!out[0].1);
        assert!(out[1].1);
    }
}
