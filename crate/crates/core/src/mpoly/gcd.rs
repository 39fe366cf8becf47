//! Recursive primitive-PRS gcd and squarefree parts.

use std::any::Any;

use super::{heugcd, MPoly, QPoly};
use crate::field::{ArithError, Field};

impl<F: Field> MPoly<F> {
    /// Greatest common divisor, monic under graded-lex; `gcd(0, 0) = 0`.
    ///
    /// Recursion is on the variable of lowest degree: contents with respect
    /// to that variable are gcd'd recursively, the primitive parts go through
    /// a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Result<Self, ArithError> {
        assert_eq!(self.nvars, other.nvars);
        gcd_rec(self, other)?.monic()
    }

    /// `a / gcd(a, da/dx_1, ..., da/dx_n)`, monic.
    pub fn squarefree_part(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.is_constant() {
            return MPoly::one(self.field.clone(), self.nvars).monic();
        }
        let mut g = self.clone();
        for v in self.used_vars() {
            if g.is_constant() {
                break;
            }
            g = gcd_rec(&g, &self.partial(v))?;
        }
        let q = self.div_exact(&g)?.expect("gcd divides its argument");
        q.monic()
    }

    /// Content with respect to `var`: gcd of the coefficients of its powers.
    pub fn content_in(&self, var: usize) -> Result<Self, ArithError> {
        let mut g = MPoly::zero(self.field.clone(), self.nvars);
        for c in self.to_univariate(var) {
            if c.is_zero() {
                continue;
            }
            g = gcd_rec(&g, &c)?;
            if g.is_constant() {
                return MPoly::one(self.field.clone(), self.nvars).monic();
            }
        }
        g.monic()
    }
}

fn gcd_rec<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> Result<MPoly<F>, ArithError> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        // probe so that zero-divisor constants are reported
        a.monic()?;
        b.monic()?;
        return Ok(MPoly::one(a.field.clone(), a.nvars));
    }
    if let Some(g) = rational_fast_path(a, b) {
        return Ok(g);
    }
    let mut vars: Vec<usize> = a.used_vars();
    for v in b.used_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    if vars.len() == 1 {
        let v = vars[0];
        let g = a.to_upoly(v).gcd(&b.to_upoly(v))?;
        return Ok(MPoly::from_upoly(&g, a.nvars, v));
    }
    let v = *vars
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).unwrap().max(b.degree_in(v).unwrap()), v))
        .unwrap();
    if !a.depends_on(v) {
        return gcd_rec(a, &b.content_in(v)?);
    }
    if !b.depends_on(v) {
        return gcd_rec(&a.content_in(v)?, b);
    }
    let ca = a.content_in(v)?;
    let cb = b.content_in(v)?;
    let content = gcd_rec(&ca, &cb)?;
    let mut pa = primitive(&a.div_exact(&ca)?.expect("content divides"), v)?;
    let mut pb = primitive(&b.div_exact(&cb)?.expect("content divides"), v)?;
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = pseudo_rem_in(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        if !r.depends_on(v) {
            return Ok(content);
        }
        let rc = r.content_in(v)?;
        let r = primitive(&r.div_exact(&rc)?.expect("content divides"), v)?;
        pa = pb;
        pb = r;
    }
    content.mul(&pb).monic()
}

/// Heuristic integer gcd when the coefficients are rational.
fn rational_fast_path<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> Option<MPoly<F>> {
    let aq = (a as &dyn Any).downcast_ref::<QPoly>()?;
    let bq = (b as &dyn Any).downcast_ref::<QPoly>()?;
    let g: Box<dyn Any> = Box::new(heugcd::gcd(aq, bq)?);
    g.downcast::<MPoly<F>>().ok().map(|g| *g)
}

/// Scales so that the leading coefficient in `var` has a normalized leading
/// scalar; over a number field this checks that scalar is a unit.
fn primitive<F: Field>(p: &MPoly<F>, var: usize) -> Result<MPoly<F>, ArithError> {
    let d = p.degree_in(var).unwrap_or(0) as u32;
    let lead = p.coeff_in(var, d);
    let lc = lead.lc().expect("nonzero").clone();
    p.normalized_with_lead(&lc)
}

fn pseudo_rem_in<F: Field>(a: &MPoly<F>, b: &MPoly<F>, var: usize) -> MPoly<F> {
    let db = b.degree_in(var).unwrap() as u32;
    let lb = b.coeff_in(var, db);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        let dr = dr as u32;
        if r.is_zero() || dr < db {
            break;
        }
        let lr = r.coeff_in(var, dr);
        let mut shift = vec![0u32; a.nvars];
        shift[var] = dr - db;
        let sub = b.mul(&lr).mul_term(&super::Monomial(shift), &a.field.one());
        r = r.mul(&lb).sub(&sub);
    }
    r
}

#[cfg(test)]
mod tests {
    use crate::field::{rat, Field, Rationals};
    use crate::mpoly::{MPoly, QPoly};
    use crate::numfield::NumberField;
    use crate::upoly::UniPoly;

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
    fn gcd_examples() {
        let a = x().pow(2).sub(&y().pow(2));
        assert_eq!(a.gcd(&x().sub(&y())).unwrap(), x().sub(&y()));
        assert_eq!(x().mul(&y()).gcd(&x().add(&y())).unwrap(), c(1));
        // (x+y+1)(x-y) and (x+y+1)(xy-1) share exactly x+y+1
        let s = x().add(&y()).add(&c(1));
        let a = s.mul(&x().sub(&y()));
        let b = s.mul(&x().mul(&y()).sub(&c(1)));
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, s);
        assert!(a.div_exact(&g).unwrap().is_some());
        assert!(b.div_exact(&g).unwrap().is_some());
    }

    #[test]
    fn gcd_three_variables() {
        let z = MPoly::var(Rationals, 3, 2);
        let x3 = MPoly::var(Rationals, 3, 0);
        let y3 = MPoly::var(Rationals, 3, 1);
        let common = x3.mul(&z).add(&y3.pow(2));
        let a = common.mul(&x3.add(&z));
        let b = common.mul(&y3.sub(&z)).mul(&x3);
        assert_eq!(a.gcd(&b).unwrap(), common);
    }

    #[test]
    fn squarefree_examples() {
        let a = x().sub(&y()).pow(2).mul(&x().add(&y()));
        assert_eq!(
            a.squarefree_part().unwrap(),
            x().sub(&y()).mul(&x().add(&y())).monic().unwrap()
        );
        let b = x().mul(&y()).mul(&c(1).add(&x()).add(&y()));
        assert_eq!(b.squarefree_part().unwrap(), b.monic().unwrap());
        let base = x().pow(2).add(&y());
        assert_eq!(base.pow(3).squarefree_part().unwrap(), base);
    }

    #[test]
    fn gcd_over_number_field() {
        // over Q(i): gcd(x^2 + y^2, x - i*y) = x - i*y
        let k = NumberField::new(UniPoly::from_ints(&[1, 0, 1])).unwrap();
        let i = k.generator();
        let xk = x().promote(&k);
        let yk = y().promote(&k);
        let a = xk.pow(2).add(&yk.pow(2));
        let b = xk.sub(&yk.scale(&i));
        assert_eq!(a.gcd(&b).unwrap(), b);
        let conj = xk.add(&yk.scale(&i));
        assert!(conj.gcd(&b).unwrap().is_constant());
        let _ = k.one();
    }
}
