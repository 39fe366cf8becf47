//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{ArithError, Field, Rationals};

/// Coefficients are stored lowest degree first; the leading coefficient is
/// nonzero unless the polynomial is zero (empty list).
#[derive(Clone)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_string_var("t"))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        UniPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        UniPoly::new(field, vec![one])
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        UniPoly::new(field, vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        UniPoly::new(field, coeffs)
    }

    /// The indeterminate `t`.
    pub fn var(field: F) -> Self {
        let one = field.one();
        UniPoly::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|a| self.field.neg(a)).collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field.clone());
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = self.field.add(&c[i + j], &self.field.mul(a, b));
            }
        }
        UniPoly::new(self.field.clone(), c)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let c = self.coeffs.iter().map(|a| self.field.mul(a, s)).collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = UniPoly::one(self.field.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| self.field.mul(a, &self.field.from_int(i as i64)))
            .collect();
        UniPoly::new(self.field.clone(), c)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// `self(other(t))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = UniPoly::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(other)
                .add(&UniPoly::constant(self.field.clone(), c.clone()));
        }
        acc
    }

    pub fn div_rem(&self, b: &Self) -> Result<(Self, Self), ArithError> {
        let Some(db) = b.degree() else {
            return Err(ArithError::DivisionByZero);
        };
        let inv = self.field.inv(b.lc().unwrap())?;
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(db)];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = self.field.mul(r.last().unwrap(), &inv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[k + j] = self.field.sub(&r[k + j], &self.field.mul(&c, bj));
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| self.field.is_zero(c)) {
                r.pop();
            }
        }
        Ok((
            UniPoly::new(self.field.clone(), q),
            UniPoly::new(self.field.clone(), r),
        ))
    }

    pub fn rem(&self, b: &Self) -> Result<Self, ArithError> {
        Ok(self.div_rem(b)?.1)
    }

    /// Quotient when `b` divides `self` exactly, `None` otherwise.
    pub fn div_exact(&self, b: &Self) -> Result<Option<Self>, ArithError> {
        let (q, r) = self.div_rem(b)?;
        Ok(r.is_zero().then_some(q))
    }

    /// `lc(b)^(deg a - deg b + 1) * a mod b`, computed without inversions.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-remainder by zero");
        let lb = b.lc().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc().unwrap().clone();
            let shifted = UniPoly::monomial(self.field.clone(), lr, dr - db).mul(b);
            r = r.scale(&lb).sub(&shifted);
        }
        r
    }

    pub fn monic(&self) -> Result<Self, ArithError> {
        match self.lc() {
            None => Ok(self.clone()),
            Some(lc) => Ok(self.scale(&self.field.inv(lc)?)),
        }
    }

    /// Divides out [`Field::normalizing_scalar`].
    pub fn normalized(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let refs: Vec<&F::Elem> = self.coeffs.iter().rev().collect();
        let s = self.field.normalizing_scalar(&refs)?;
        Ok(self.scale(&self.field.inv(&s)?))
    }

    /// Monic gcd via a normalized pseudo-remainder sequence; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self, ArithError> {
        let mut a = self.normalized()?;
        let mut b = other.normalized()?;
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).normalized()?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), ArithError> {
        let f = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(f.clone()), UniPoly::zero(f.clone()));
        let (mut t0, mut t1) = (UniPoly::zero(f.clone()), UniPoly::one(f.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => Ok((r0, s0, t0)),
            Some(lc) => {
                let inv = f.inv(lc)?;
                Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
            }
        }
    }

    /// `a / gcd(a, a')`, monic. Zero input is rejected with `DivisionByZero`.
    pub fn squarefree_part(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let g = self.gcd(&self.derivative())?;
        let (q, _) = self.div_rem(&g)?;
        q.monic()
    }

    /// Compact rendering such as `t^2+t+1` or `2*t-1/3`.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let r = self.field.repr(c);
            if r.negative {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&r.text);
            } else if r.unit {
                out.push_str(&mono);
            } else {
                out.push_str(&r.text);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("t"))
    }
}

impl UniPoly<Rationals> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(
            Rationals,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        UniPoly::new(Rationals, coeffs)
    }

    /// Monic polynomial with the given rational roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(UniPoly::one(Rationals), |acc, r| {
            acc.mul(&UniPoly::new(Rationals, vec![-r, BigRational::one()]))
        })
    }

    /// Integer coefficients of the primitive associate with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let Ok(p) = self.normalized() else {
            return vec![];
        };
        p.coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = UniPoly::zero(Rationals);
        for i in (0..n).rev() {
            let lin = UniPoly::new(Rationals, vec![-&xs[i], BigRational::one()]);
            acc = acc
                .mul(&lin)
                .add(&UniPoly::constant(Rationals, dd[i].clone()));
        }
        acc
    }

    /// Rational roots, found through the rational root theorem. Returns
    /// `None` when the extreme coefficients are too large to enumerate their
    /// divisors cheaply.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        let mut ints = self.primitive_integer();
        let mut roots = Vec::new();
        if ints.is_empty() {
            return Some(roots);
        }
        while ints.len() > 1 && ints[0].is_zero() {
            if roots.is_empty() {
                roots.push(BigRational::zero());
            }
            ints.remove(0);
        }
        if ints.len() <= 1 {
            return Some(roots);
        }
        let lead = small_divisors(ints.last().unwrap())?;
        let tail = small_divisors(&ints[0])?;
        let poly = UniPoly::new(
            Rationals,
            ints.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
        for a in &tail {
            for b in &lead {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(sign) * a, b.clone());
                    if cand.denom() != b && !b.is_one() {
                        // not in lowest terms; covered by another pair
                        continue;
                    }
                    if poly.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Splits a list of squarefree polynomials into a pairwise coprime family
/// with the same roots (a gcd-free basis). Constants are dropped, outputs are
/// monic.
pub fn coprime_basis(polys: &[UniPoly<Rationals>]) -> Vec<UniPoly<Rationals>> {
    let mut basis: Vec<UniPoly<Rationals>> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        let mut pending = vec![p.squarefree_part().expect("nonzero")];
        while let Some(mut a) = pending.pop() {
            if a.is_constant() {
                continue;
            }
            let mut i = 0;
            while i < basis.len() {
                let g = a.gcd(&basis[i]).expect("over Q");
                if g.is_constant() {
                    i += 1;
                    continue;
                }
                let b = basis.swap_remove(i);
                let b_rest = b.div_exact(&g).unwrap().unwrap();
                a = a.div_exact(&g).unwrap().unwrap();
                pending.push(b_rest);
                pending.push(g);
                if a.is_constant() {
                    break;
                }
                i = 0;
            }
            if !a.is_constant() {
                basis.push(a.monic().unwrap());
            }
        }
    }
    for b in &mut basis {
        *b = b.monic().unwrap();
    }
    basis.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    basis
}

/// Coprime basis refined by splitting off every rational root as its own
/// linear factor.
pub fn split_rational_roots(basis: Vec<UniPoly<Rationals>>) -> Vec<UniPoly<Rationals>> {
    let mut out = Vec::new();
    for p in basis {
        match p.rational_roots() {
            Some(roots) if !roots.is_empty() && p.degree() > Some(1) => {
                let lin = UniPoly::from_roots(&roots);
                let rest = p.div_exact(&lin).unwrap().unwrap();
                for r in roots {
                    out.push(UniPoly::from_roots(&[r]));
                }
                if !rest.is_constant() {
                    out.push(rest.monic().unwrap());
                }
            }
            _ => out.push(p),
        }
    }
    out.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn p(c: &[i64]) -> UniPoly<Rationals> {
        UniPoly::from_ints(c)
    }

    #[test]
    fn gcd_examples() {
        // gcd(t^2-1, t-1) = t-1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        // gcd(t^2+1, t+2) = 1
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[2, 1])).unwrap(), p(&[1]));
        // gcd(0, 0) = 0
        assert!(p(&[]).gcd(&p(&[])).unwrap().is_zero());
    }

    #[test]
    fn gcd_against_root_oracle() {
        // t^3 - t = (t-1) t (t+1), t^2 - 1 = (t-1)(t+1): common roots {-1, 1}
        let a = p(&[0, -1, 0, 1]);
        let b = p(&[-1, 0, 1]);
        let common: Vec<_> = [-1i64, 0, 1]
            .into_iter()
            .filter(|&r| a.eval(&rat(r)).is_zero() && b.eval(&rat(r)).is_zero())
            .map(rat)
            .collect();
        assert_eq!(a.gcd(&b).unwrap(), UniPoly::from_roots(&common));
    }

    #[test]
    fn squarefree_examples() {
        // (t-1)^2 (t+2) -> (t-1)(t+2)
        let a = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(a.squarefree_part().unwrap(), p(&[-1, 1]).mul(&p(&[2, 1])));
        let cube = p(&[-1, 0, 0, 1]);
        assert_eq!(cube.squarefree_part().unwrap(), cube);
        // (t^2+t+1)^2: derivative 2(t^2+t+1)(2t+1), so the gcd is t^2+t+1
        let c = p(&[1, 1, 1]);
        let sq = c.pow(2);
        assert_eq!(sq.gcd(&sq.derivative()).unwrap(), c);
        assert_eq!(sq.squarefree_part().unwrap(), c);
        assert_eq!(p(&[]).squarefree_part(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-3, 2, 5]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, p(&[1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = UniPoly::from_rationals(vec![ratio(1, 2), rat(-3), rat(0), rat(7)]);
        let xs: Vec<_> = (0..4).map(rat).collect();
        let ys: Vec<_> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn rational_roots_and_splitting() {
        let f = p(&[-1, 0, 0, 1]); // t^3 - 1
        assert_eq!(f.rational_roots().unwrap(), vec![rat(1)]);
        let g = p(&[-2, 3]).mul(&p(&[1, 0, 1])); // (3t-2)(t^2+1)
        assert_eq!(g.rational_roots().unwrap(), vec![ratio(2, 3)]);
        let split = split_rational_roots(vec![f.monic().unwrap()]);
        assert_eq!(split, vec![p(&[-1, 1]), p(&[1, 1, 1])]);
    }

    #[test]
    fn coprime_basis_refines() {
        let a = p(&[-1, 0, 1]); // (t-1)(t+1)
        let b = p(&[-1, 1]).mul(&p(&[2, 1])); // (t-1)(t+2)
        let basis = coprime_basis(&[a, b]);
        assert_eq!(basis, vec![p(&[1, 1]), p(&[2, 1]), p(&[-1, 1])]);
    }

    #[test]
    fn printing() {
        assert_eq!(p(&[1, 1, 1]).to_string_var("λ"), "λ^2+λ+1");
        assert_eq!(p(&[-1, 1]).to_string_var("λ"), "λ-1");
        let q = UniPoly::from_rationals(vec![ratio(-1, 2), rat(0), rat(-3)]);
        assert_eq!(q.to_string_var("t"), "-3*t^2-1/2");
    }
}
