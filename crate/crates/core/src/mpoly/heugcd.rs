//! Heuristic gcd over `Z` by evaluation at a large integer and `ξ`-adic
//! reconstruction. Every answer is checked by trial division; `None` means
//! the heuristic gave up and the caller falls back to the remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{MPoly, QPoly};
use crate::field::Rationals;

const MAX_BITS: u64 = 40_000;

/// Monic gcd of two rational polynomials.
pub(super) fn gcd(a: &QPoly, b: &QPoly) -> Option<QPoly> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let a = integer_primitive(a);
    let b = integer_primitive(b);
    let g = heu(&a, &b)?;
    g.monic().ok()
}

/// Primitive associate with integer coefficients.
fn integer_primitive(p: &QPoly) -> QPoly {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
    }
    let mut cont = BigInt::zero();
    for (_, c) in p.terms() {
        cont = cont.gcd(&(c.numer() * (&den / c.denom())));
    }
    p.scale(&BigRational::new(den, cont))
}

fn int_content(p: &QPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn max_norm(p: &QPoly) -> BigInt {
    p.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_default()
}

fn heu(a: &QPoly, b: &QPoly) -> Option<QPoly> {
    let n = a.nvars();
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let ca = int_content(a);
    let cb = int_content(b);
    let c = BigRational::from_integer(ca.gcd(&cb));
    if a.is_constant() || b.is_constant() {
        return Some(MPoly::constant(Rationals, n, c));
    }
    let a = a.scale(&BigRational::from_integer(ca).recip());
    let b = b.scale(&BigRational::from_integer(cb).recip());
    let mut vars = a.used_vars();
    vars.extend(b.used_vars());
    let v = *vars.iter().max().unwrap();
    let deg = a.degree_in(v).unwrap().max(b.degree_in(v).unwrap()) as u64;
    let mut xi: BigInt = 2 * max_norm(&a).min(max_norm(&b)) + 29;
    for _ in 0..6 {
        if xi.bits() * deg.max(1) > MAX_BITS {
            return None;
        }
        let xq = BigRational::from_integer(xi.clone());
        let ia = a.eval_var(v, &xq);
        let ib = b.eval_var(v, &xq);
        if let Some(gamma) = heu(&ia, &ib) {
            let g = expand(&gamma, &xi, v);
            if !g.is_zero() {
                let g = g.scale(&BigRational::from_integer(int_content(&g)).recip());
                if divides(&g, &a) && divides(&g, &b) {
                    let g = if g.lc().unwrap().is_negative() {
                        g.neg()
                    } else {
                        g
                    };
                    return Some(g.scale(&c));
                }
            }
        }
        xi = (&xi * 73794u32) / 27011u32;
    }
    None
}

/// Reads the symmetric `ξ`-adic digits of `gamma` as coefficients of `v^k`.
fn expand(gamma: &QPoly, xi: &BigInt, v: usize) -> QPoly {
    let n = gamma.nvars();
    let half = xi / 2;
    let mut rest = gamma.clone();
    let mut out = MPoly::zero(Rationals, n);
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = MPoly::from_terms(
            Rationals,
            n,
            rest.terms().map(|(m, c)| {
                let mut r = c.numer().mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                (m.0.clone(), BigRational::from_integer(r))
            }),
        );
        let mut shift = vec![0u32; n];
        shift[v] = k;
        out = out.add(&digit.mul_term(&super::Monomial(shift), &BigRational::one()));
        rest = rest
            .sub(&digit)
            .scale(&BigRational::from_integer(xi.clone()).recip());
        k += 1;
        if k > 10_000 {
            break;
        }
    }
    out
}

fn divides(g: &QPoly, a: &QPoly) -> bool {
    matches!(a.div_exact(g), Ok(Some(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn heuristic_agrees_on_examples() {
        let x = MPoly::var(Rationals, 2, 0);
        let y = MPoly::var(Rationals, 2, 1);
        let one = MPoly::one(Rationals, 2);
        let s = one.add(&x).add(&y);
        let a = s.mul(&x.sub(&y)).scale(&rat(6));
        let b = s.mul(&x.mul(&y).sub(&one)).scale(&rat(4));
        assert_eq!(gcd(&a, &b).unwrap(), s);
        assert!(gcd(&x, &y).unwrap().is_constant());
    }
}
