//! Reduced rational functions `p/q` over `Q`, pencil members, the Jacobian
//! derivation and composition with univariate fractions.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::field::{Field, Rationals};
use crate::mpoly::{default_names, MPoly, QPoly};
use crate::ratlambda::{LambdaFraction, RationalFunctionField};
use crate::upoly::UniPoly;

/// `p/q` with `gcd(p, q) = 1` and `q` monic under graded-lex.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction {
    num: QPoly,
    den: QPoly,
}

impl RationalFunction {
    /// Reduces `p/q`.
    pub fn new(p: QPoly, q: QPoly) -> Result<Self, Error> {
        if p.nvars() != q.nvars() {
            return Err(Error::NvarsMismatch(p.nvars(), q.nvars()));
        }
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if p.is_zero() {
            let n = q.nvars();
            return Ok(RationalFunction {
                num: p,
                den: MPoly::one(Rationals, n),
            });
        }
        let g = p.gcd(&q)?;
        let (p, q) = if g.is_constant() {
            (p, q)
        } else {
            (
                p.div_exact(&g)?.expect("gcd divides"),
                q.div_exact(&g)?.expect("gcd divides"),
            )
        };
        let s = q.lc().expect("nonzero").clone();
        let inv = BigRational::one() / s;
        Ok(RationalFunction {
            num: p.scale(&inv),
            den: q.scale(&inv),
        })
    }

    pub fn from_poly(p: QPoly) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: MPoly::one(Rationals, n),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(Rationals, nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(Rationals, nvars, i))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// `max(deg p, deg q)`.
    pub fn degree(&self) -> usize {
        self.num
            .total_degree()
            .unwrap_or(0)
            .max(self.den.total_degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `true` when the denominator is a constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn used_vars(&self) -> Vec<usize> {
        let mut v = self.num.used_vars();
        for i in self.den.used_vars() {
            if !v.contains(&i) {
                v.push(i);
            }
        }
        v.sort_unstable();
        v
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, k: u32) -> Self {
        // powers of coprime polynomials stay coprime
        RationalFunction {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn partial(&self, var: usize) -> Self {
        let n = self
            .num
            .partial(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(var)));
        Self::new(n, self.den.pow(2)).expect("nonzero denominator")
    }

    /// Unreduced numerator of the partial derivative, over `q^2`.
    fn partial_numerator(&self, var: usize) -> QPoly {
        self.num
            .partial(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(var)))
    }

    /// `p - c q`.
    pub fn member(&self, c: &BigRational) -> QPoly {
        self.num.sub(&self.den.scale(c))
    }

    /// Member of the pencil `p - λ q` at `λ`, with coefficients in `field`.
    pub fn pencil_member<F: Field>(&self, field: &F, lambda: &ExtendedScalar<F::Elem>) -> MPoly<F> {
        match lambda {
            ExtendedScalar::Infinity => self.den.promote(field),
            ExtendedScalar::Finite(l) => self
                .num
                .promote(field)
                .sub(&self.den.promote(field).scale(l)),
        }
    }

    /// `p - λ q` over `Q(λ)` with `λ` transcendental.
    pub fn generic_member(&self) -> MPoly<RationalFunctionField> {
        let k = RationalFunctionField;
        self.num
            .promote(&k)
            .sub(&self.den.promote(&k).scale(&LambdaFraction::lambda()))
    }

    /// Applies `x_i <- images[i]` to numerator and denominator.
    pub fn substitute(&self, images: &[QPoly]) -> Result<Self, Error> {
        Self::new(self.num.substitute(images), self.den.substitute(images))
    }

    pub fn to_string_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_polynomial() {
            return self.num.to_string_with(names);
        }
        format!(
            "({}) / ({})",
            self.num.to_string_with(names),
            self.den.to_string_with(names)
        )
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars())))
    }
}

/// A point of the projective line over a field.
#[derive(Clone, PartialEq, Debug)]
pub enum ExtendedScalar<E> {
    Finite(E),
    Infinity,
}

/// `D_f(g) = f_x g_y - f_y g_x` for bivariate `f` and `g`.
pub fn jacobian_derivation(
    f: &RationalFunction,
    g: &RationalFunction,
) -> Result<RationalFunction, Error> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::WrongNvars {
            expected: "2",
            got: f.nvars().max(g.nvars()),
        });
    }
    let a = f.partial(0).mul(&g.partial(1))?;
    let b = f.partial(1).mul(&g.partial(0))?;
    a.sub(&b)
}

/// Whether every 2x2 minor of the Jacobian matrix of `(f, g)` vanishes.
pub fn algebraically_dependent(f: &RationalFunction, g: &RationalFunction) -> Result<bool, Error> {
    let n = f.nvars();
    if n != g.nvars() {
        return Err(Error::NvarsMismatch(n, g.nvars()));
    }
    let df: Vec<QPoly> = (0..n).map(|i| f.partial_numerator(i)).collect();
    let dg: Vec<QPoly> = (0..n).map(|i| g.partial_numerator(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !df[i].mul(&dg[j]).sub(&df[j].mul(&dg[i])).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Univariate fraction `a(t)/b(t)`, reduced with `b` monic.
#[derive(Clone, PartialEq, Debug)]
pub struct UniRationalFunction {
    num: UniPoly<Rationals>,
    den: UniPoly<Rationals>,
}

impl UniRationalFunction {
    pub fn new(a: UniPoly<Rationals>, b: UniPoly<Rationals>) -> Result<Self, Error> {
        if b.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if a.is_zero() {
            return Ok(UniRationalFunction {
                num: a,
                den: UniPoly::one(Rationals),
            });
        }
        let g = a.gcd(&b)?;
        let a = a.div_exact(&g)?.expect("gcd divides");
        let b = b.div_exact(&g)?.expect("gcd divides");
        let inv = BigRational::one() / b.lc().unwrap();
        Ok(UniRationalFunction {
            num: a.scale(&inv),
            den: b.scale(&inv),
        })
    }

    pub fn from_poly(a: UniPoly<Rationals>) -> Self {
        UniRationalFunction {
            num: a,
            den: UniPoly::one(Rationals),
        }
    }

    pub fn num(&self) -> &UniPoly<Rationals> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<Rationals> {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    /// `self(s(t))` for `s` univariate.
    pub fn compose_uni(&self, s: &UniRationalFunction) -> Result<Self, Error> {
        let k = self.degree() as u32;
        let (n, d) = homogenized(
            self,
            &s.num,
            &s.den,
            k,
            |a, b| a.mul(b),
            UniPoly::one(Rationals),
        );
        Self::new(n, d)
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            return self.num.to_string_var(var);
        }
        format!(
            "({}) / ({})",
            self.num.to_string_var(var),
            self.den.to_string_var(var)
        )
    }
}

impl fmt::Display for UniRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("t"))
    }
}

impl UniPoly<Rationals> {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}

/// `(sum a_i s^i d^(k-i), sum b_i s^i d^(k-i))` for `r = a/b`, `s = num/den`.
fn homogenized<P: Clone + PolyLike>(
    r: &UniRationalFunction,
    num: &P,
    den: &P,
    k: u32,
    mul: impl Fn(&P, &P) -> P,
    one: P,
) -> (P, P) {
    let mut num_pows = vec![one.clone()];
    let mut den_pows = vec![one];
    for i in 1..=k as usize {
        num_pows.push(mul(&num_pows[i - 1], num));
        den_pows.push(mul(&den_pows[i - 1], den));
    }
    let mut a = num.zero_like();
    let mut b = num.zero_like();
    for i in 0..=k as usize {
        let basis = mul(&num_pows[i], &den_pows[k as usize - i]);
        let ai = r.num.coeff(i);
        let bi = r.den.coeff(i);
        if !ai.is_zero() {
            a = a.add_like(&basis.scale_like(&ai));
        }
        if !bi.is_zero() {
            b = b.add_like(&basis.scale_like(&bi));
        }
    }
    (a, b)
}

trait PolyLike: Sized {
    fn zero_like(&self) -> Self;
    fn add_like(&self, o: &Self) -> Self;
    fn scale_like(&self, c: &BigRational) -> Self;
}

impl PolyLike for UniPoly<Rationals> {
    fn zero_like(&self) -> Self {
        UniPoly::zero(Rationals)
    }
    fn add_like(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_like(&self, c: &BigRational) -> Self {
        self.scale(c)
    }
}

impl PolyLike for QPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(Rationals, self.nvars())
    }
    fn add_like(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scale_like(&self, c: &BigRational) -> Self {
        self.scale(c)
    }
}

/// The two polynomials whose quotient is `r∘g`, before reduction.
pub(crate) fn composition_parts(r: &UniRationalFunction, g: &RationalFunction) -> (QPoly, QPoly) {
    let one = MPoly::one(Rationals, g.nvars());
    homogenized(r, &g.num, &g.den, r.degree() as u32, |a, b| a.mul(b), one)
}

/// `r∘g`, checked against the law `deg(r∘g) = deg r * deg g`.
pub fn compose(r: &UniRationalFunction, g: &RationalFunction) -> Result<RationalFunction, Error> {
    if g.is_constant() {
        return Err(Error::ConstantInput);
    }
    let (a, b) = composition_parts(r, g);
    let f = RationalFunction::new(a, b)?;
    let expected = r.degree() * g.degree();
    if f.degree() != expected {
        return Err(Error::DegreeLawViolation {
            expected,
            got: f.degree(),
        });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn x() -> QPoly {
        MPoly::var(Rationals, 2, 0)
    }
    fn y() -> QPoly {
        MPoly::var(Rationals, 2, 1)
    }
    fn one() -> QPoly {
        MPoly::one(Rationals, 2)
    }
    fn rf(p: QPoly, q: QPoly) -> RationalFunction {
        RationalFunction::new(p, q).unwrap()
    }
    fn t(c: &[i64]) -> UniPoly<Rationals> {
        UniPoly::from_ints(c)
    }

    pub(crate) fn lorenzini() -> RationalFunction {
        let s = one().add(&x()).add(&y());
        rf(
            x().pow(3).add(&y().pow(3)).add(&s.pow(3)),
            x().mul(&y()).mul(&s),
        )
    }

    #[test]
    fn reduction_examples() {
        let f = rf(x().pow(2).sub(&y().pow(2)), x().sub(&y()));
        assert_eq!(f.num(), &x().add(&y()));
        assert!(f.den().is_constant());
        assert_eq!(f.degree(), 1);
        assert_eq!(rf(x(), y()).degree(), 1);
        let l = lorenzini();
        assert_eq!(l.degree(), 3);
        assert_eq!(l.den(), &x().mul(&y()).mul(&one().add(&x()).add(&y())));
        // scaling puts the denominator in monic form
        let g = rf(x().scale(&rat(4)), y().scale(&rat(2)));
        assert_eq!(g.num(), &x().scale(&rat(2)));
        assert_eq!(g.den(), &y());
        assert_eq!(
            RationalFunction::new(x(), MPoly::zero(Rationals, 2)),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn pencil_members() {
        let f = rf(x(), y());
        assert_eq!(f.member(&rat(2)), x().sub(&y().scale(&rat(2))));
        assert_eq!(f.pencil_member(&Rationals, &ExtendedScalar::Infinity), y());
        let l = lorenzini();
        assert_eq!(
            l.pencil_member(&Rationals, &ExtendedScalar::Finite(rat(1))),
            l.num().sub(l.den())
        );
    }

    #[test]
    fn derivation_examples() {
        let fx = RationalFunction::var(2, 0);
        let fy = RationalFunction::var(2, 1);
        assert_eq!(
            jacobian_derivation(&fx, &fy).unwrap(),
            RationalFunction::constant(2, rat(1))
        );
        let l = lorenzini();
        assert!(jacobian_derivation(&l, &l).unwrap().is_zero());
        let f = rf(x(), y());
        assert_eq!(jacobian_derivation(&f, &fx).unwrap(), rf(x(), y().pow(2)));
    }

    #[test]
    fn dependence_examples() {
        let f = rf(x(), y());
        assert!(algebraically_dependent(&f, &f.pow(2)).unwrap());
        assert!(!algebraically_dependent(
            &RationalFunction::var(2, 0),
            &RationalFunction::var(2, 1)
        )
        .unwrap());
        let x3 = MPoly::var(Rationals, 3, 0);
        let y3 = MPoly::var(Rationals, 3, 1);
        let f3 = rf(x3.clone(), y3.clone());
        let g3 = rf(x3.pow(2).add(&y3.pow(2)), x3.mul(&y3));
        assert!(algebraically_dependent(&f3, &g3).unwrap());
        assert!(algebraically_dependent(&g3, &f3).unwrap());
        let z3 = RationalFunction::var(3, 2);
        assert!(!algebraically_dependent(&f3, &z3).unwrap());
    }

    #[test]
    fn composition_examples() {
        let g = rf(x(), y());
        let sq = UniRationalFunction::from_poly(t(&[0, 0, 1]));
        assert_eq!(compose(&sq, &g).unwrap(), rf(x().pow(2), y().pow(2)));
        let r = UniRationalFunction::new(t(&[1, 0, 1]), t(&[0, 1])).unwrap();
        assert_eq!(
            compose(&r, &g).unwrap(),
            rf(x().pow(2).add(&y().pow(2)), x().mul(&y()))
        );
        let cube = UniRationalFunction::from_poly(t(&[0, 0, 0, 1]));
        let h = rf(x().add(&y()), x().sub(&y()));
        let f = compose(&cube, &h).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f, rf(x().add(&y()).pow(3), x().sub(&y()).pow(3)));
        // r(t) = (t^2 + 1)/t with g = 1 would be constant
        assert_eq!(
            compose(&r, &RationalFunction::constant(2, ratio(1, 2))),
            Err(Error::ConstantInput)
        );
    }

    #[test]
    fn univariate_composition_and_printing() {
        let r = UniRationalFunction::new(t(&[1, 0, 1]), t(&[0, 1])).unwrap();
        assert_eq!(r.to_string(), "(t^2+1) / (t)");
        let inv = UniRationalFunction::new(t(&[1]), t(&[0, 1])).unwrap();
        // r(1/t) = r(t) for this symmetric r
        assert_eq!(r.compose_uni(&inv).unwrap(), r);
        assert_eq!(
            UniRationalFunction::from_poly(t(&[0, 0, 1])).to_string(),
            "t^2"
        );
    }

    #[test]
    fn generic_member_specializes() {
        let l = lorenzini();
        let g = l.generic_member();
        let at2 = g.map_field(Rationals, |c| c.eval(&rat(2)).unwrap());
        assert_eq!(at2, l.member(&rat(2)));
    }
}
