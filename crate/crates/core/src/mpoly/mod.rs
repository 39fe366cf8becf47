//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms live in a map keyed by [`Monomial`], ordered graded-lexicographically
//! with the first variable largest. The canonical text form lists terms in
//! descending order, e.g. `3*x^2*y - 1/2*y + 5`.

mod gcd;
mod heugcd;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::field::{ArithError, Field, Rationals};
use crate::upoly::UniPoly;

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names used when none are supplied: `x, y, z`, then `x1..xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

#[derive(Clone)]
pub struct MPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

pub type QPoly = MPoly<Rationals>;

impl<F: Field> PartialEq for MPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

impl<F: Field> MPoly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        MPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = MPoly::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let one = field.one();
        MPoly::constant(field, nvars, one)
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        let mut p = MPoly::zero(field.clone(), nvars);
        p.add_term(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn from_terms(
        field: F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>,
    ) -> Self {
        let mut p = MPoly::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> F::Elem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = self.field.add(old, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<F::Elem> {
        if !self.is_constant() {
            return None;
        }
        Some(self.coefficient(&vec![0; self.nvars]))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<usize> {
        self.terms.keys().map(|m| m.0[var] as usize).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.depends_on(v)).collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> Option<&F::Elem> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        if self.field.is_zero(s) {
            return MPoly::zero(self.field.clone(), self.nvars);
        }
        self.map_coeffs(|c| self.field.mul(c, s))
    }

    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), self.field.mul(cc, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one(self.field.clone(), self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn map_coeffs(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Moves coefficients into another field.
    pub fn map_field<G: Field>(&self, g: G, f: impl Fn(&F::Elem) -> G::Elem) -> MPoly<G> {
        let mut out = MPoly::zero(g, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, self.field.mul(c, &self.field.from_int(e as i64)));
        }
        out
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Sum of the terms of maximal total degree.
    pub fn leading_homogeneous(&self) -> Self {
        match self.total_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    /// Coefficient of `var^k` as a polynomial in the other variables.
    pub fn coeff_in(&self, var: usize, k: u32) -> Self {
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut m2 = m.clone();
                m2.0[var] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Coefficients with respect to `var`, lowest power first.
    pub fn to_univariate(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0);
        let mut out = vec![MPoly::zero(self.field.clone(), self.nvars); d + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// Substitutes `var = value` for a scalar value.
    pub fn eval_var(&self, var: usize, value: &F::Elem) -> Self {
        let d = self.degree_in(var).unwrap_or(0);
        let mut powers = vec![self.field.one()];
        for i in 1..=d {
            powers.push(self.field.mul(&powers[i - 1], value));
        }
        let mut out = MPoly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(m2, self.field.mul(c, &powers[k]));
        }
        out
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = self.field.mul(&t, &point[v]);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i = images[i]`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[MPoly<F>]) -> MPoly<F> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MPoly<F>>> = images
            .iter()
            .map(|p| vec![MPoly::one(self.field.clone(), target), p.clone()])
            .collect();
        let mut out = MPoly::zero(self.field.clone(), target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(self.field.clone(), target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[v].len() <= e as usize {
                    let next = cache[v].last().unwrap().mul(&images[v]);
                    cache[v].push(next);
                }
                t = t.mul(&cache[v][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Reinterprets the polynomial in a ring with a different number of
    /// variables, mapping variable `i` to `map[i]`.
    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = MPoly::zero(self.field.clone(), nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[map[i]] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Divides by the graded-lex leading coefficient.
    pub fn monic(&self) -> Result<Self, ArithError> {
        match self.lc() {
            None => Ok(self.clone()),
            Some(lc) => Ok(self.scale(&self.field.inv(lc)?)),
        }
    }

    /// Divides by [`Field::normalizing_scalar`] taken with `lead` first.
    pub(crate) fn normalized_with_lead(&self, lead: &F::Elem) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut refs: Vec<&F::Elem> = vec![lead];
        refs.extend(self.terms.values());
        let s = self.field.normalizing_scalar(&refs)?;
        Ok(self.scale(&self.field.inv(&s)?))
    }

    pub fn normalized(&self) -> Result<Self, ArithError> {
        match self.lc() {
            None => Ok(self.clone()),
            Some(lc) => self.normalized_with_lead(&lc.clone()),
        }
    }

    /// Quotient when `b` divides `self` exactly, `None` otherwise.
    pub fn div_exact(&self, b: &Self) -> Result<Option<Self>, ArithError> {
        let Some((mb, cb)) = b.leading_term() else {
            return Err(ArithError::DivisionByZero);
        };
        let inv = self.field.inv(cb)?;
        let mut q = MPoly::zero(self.field.clone(), self.nvars);
        let mut r = self.clone();
        while let Some((mr, cr)) = r.leading_term() {
            if !mb.divides(mr) {
                return Ok(None);
            }
            let m = mb.quotient_of(mr);
            let c = self.field.mul(cr, &inv);
            r = r.sub(&b.mul_term(&m, &c));
            q.add_term(m, c);
        }
        Ok(Some(q))
    }

    /// Univariate view when at most variable `var` occurs.
    pub fn to_upoly(&self, var: usize) -> UniPoly<F> {
        let d = self.degree_in(var).unwrap_or(0);
        let mut c = vec![self.field.zero(); d + 1];
        for (m, v) in &self.terms {
            debug_assert!(m.0.iter().enumerate().all(|(i, &e)| i == var || e == 0));
            c[m.0[var] as usize] = v.clone();
        }
        UniPoly::new(self.field.clone(), c)
    }

    pub fn from_upoly(p: &UniPoly<F>, nvars: usize, var: usize) -> Self {
        let mut out = MPoly::zero(p.field().clone(), nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn to_string_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let r = self.field.repr(c);
            if out.is_empty() {
                if r.negative {
                    out.push('-');
                }
            } else {
                out.push_str(if r.negative { " - " } else { " + " });
            }
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let n = names[i].as_ref();
                        if e == 1 {
                            n.to_string()
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
            if mono.is_empty() {
                out.push_str(&r.text);
            } else {
                if !r.unit {
                    out.push_str(&r.text);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl MPoly<Rationals> {
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        MPoly::from_terms(
            Rationals,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigRational::from_integer((*c).into()))),
        )
    }

    /// Promotes rational coefficients into `field`.
    pub fn promote<G: Field>(&self, field: &G) -> MPoly<G> {
        self.map_field(field.clone(), |c| field.from_rational(c))
    }
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
    fn c(n: i64) -> QPoly {
        MPoly::constant(Rationals, 2, rat(n))
    }

    #[test]
    fn canonical_printing() {
        let p = x()
            .pow(2)
            .mul(&y())
            .scale(&rat(3))
            .sub(&y().scale(&ratio(1, 2)))
            .add(&c(5));
        assert_eq!(p.to_string(), "3*x^2*y - 1/2*y + 5");
        assert_eq!(x().neg().add(&y()).to_string(), "-x + y");
        assert_eq!(c(0).to_string(), "0");
        assert_eq!(c(-4).to_string(), "-4");
    }

    #[test]
    fn graded_lex_order() {
        let p = x().add(&y()).pow(2).add(&x()).add(&c(1));
        assert_eq!(p.to_string(), "x^2 + 2*x*y + y^2 + x + 1");
    }

    #[test]
    fn partial_examples() {
        // d(x^2 y)/dx = 2xy
        assert_eq!(
            x().pow(2).mul(&y()).partial(0),
            x().mul(&y()).scale(&rat(2))
        );
        assert!(y().pow(3).partial(0).is_zero());
        // d/dx (x^3 + y^3 + (1+x+y)^3) = 3x^2 + 3(1+x+y)^2
        let s = c(1).add(&x()).add(&y());
        let f = x().pow(3).add(&y().pow(3)).add(&s.pow(3));
        let want = x().pow(2).scale(&rat(3)).add(&s.pow(2).scale(&rat(3)));
        assert_eq!(f.partial(0), want);
    }

    #[test]
    fn leading_homogeneous_examples() {
        let a = x().pow(2).add(&x()).add(&c(1));
        assert_eq!(a.leading_homogeneous(), x().pow(2));
        let s = c(1).add(&x()).add(&y());
        let l = x().pow(3).add(&y().pow(3)).add(&s.pow(3));
        let xy = x().add(&y());
        assert_eq!(
            l.leading_homogeneous(),
            x().pow(3).add(&y().pow(3)).add(&xy.pow(3))
        );
        let m = x().mul(&y()).mul(&s);
        assert_eq!(m.leading_homogeneous(), x().mul(&y()).mul(&xy));
    }

    #[test]
    fn exact_division() {
        let a = x().add(&y());
        let b = x().sub(&y()).add(&c(2));
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a).unwrap(), Some(b.clone()));
        assert_eq!(ab.add(&c(1)).div_exact(&a).unwrap(), None);
    }

    #[test]
    fn substitution() {
        // x/(y+z) style slice: substitute (x, y) <- (x + y, 2)
        let p = x().mul(&y());
        let s = p.substitute(&[x().add(&y()), c(2)]);
        assert_eq!(s, x().add(&y()).scale(&rat(2)));
    }
}
