//! Compositeness, decompositions `f = r∘g` and membership in `Q(f)`.
//!
//! A decomposition is extracted from fibers `F = p - λ0 q`. A
//! random element of the Gao kernel has `G* ≡ c_i F_x (mod F_i)` on each
//! absolute factor `F_i`, so the factors are `gcd(F, G* - c_i F_x)` where the
//! `c_i` are the roots of a resultant in `c`. For composite `f` every factor
//! is `ψ - t_i φ` up to scaling, so the coordinates of the factors over `Q`
//! span the pencil `<ψ, φ>` and two independent ones give the inner
//! fraction up to a Möbius transformation, always with rational
//! coefficients. A fiber through a rational point `P` contains the rational
//! factor `ψ - g(P) φ`, so two such fibers usually suffice and number fields
//! are only needed for the fallback on a generic fiber.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::field::Rationals;
use crate::irrcount::{degree_drop_value, generic_count, GaoSystem};
use crate::linalg;
use crate::mpoly::{MPoly, Monomial, QPoly};
use crate::numfield::split_run;
use crate::ratfunc::{compose, composition_parts, RationalFunction, UniRationalFunction};
use crate::spectrum::composite_generic_count;
use crate::upoly::{coprime_basis, split_rational_roots, UniPoly};

/// Default number of fibers tried by [`decompose`].
pub const RETRY_BUDGET: usize = 8;

/// `f = outer∘inner` with `deg outer >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub outer: UniRationalFunction,
    pub inner: RationalFunction,
    /// Coefficient field of `inner`; extraction always lands in `Q`.
    pub field: String,
}

impl Decomposition {
    pub fn to_json<S: AsRef<str>>(&self, names: &[S]) -> Value {
        json!({
            "outer_num": self.outer.num().to_string_var("t"),
            "outer_den": self.outer.den().to_string_var("t"),
            "inner_num": self.inner.num().to_string_with(names),
            "inner_den": self.inner.den().to_string_with(names),
            "field": self.field,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomposed {
    Composite(Decomposition),
    NotComposite,
}

/// Whether `f = r∘g` with `deg r >= 2`.
pub fn is_composite(f: &RationalFunction, seed: u64) -> Result<bool, Error> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    Ok(composite_generic_count(f, seed)? > 1)
}

/// Finds `r` of degree at most `k` with `r∘g = f` by solving
/// `p * b(g) - q * a(g) = 0` for the coefficients of `r = a/b`.
pub fn solve_outer(
    f: &RationalFunction,
    g: &RationalFunction,
    k: usize,
) -> Result<Option<UniRationalFunction>, Error> {
    if g.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    if !f.degree().is_multiple_of(g.degree()) || f.degree() != k * g.degree() {
        return Err(Error::DegreeMismatch {
            outer: f.degree(),
            inner: g.degree(),
        });
    }
    let (psi, phi) = (g.num(), g.den());
    let mut psi_pows = vec![MPoly::one(Rationals, f.nvars())];
    let mut phi_pows = psi_pows.clone();
    for i in 1..=k {
        psi_pows.push(psi_pows[i - 1].mul(psi));
        phi_pows.push(phi_pows[i - 1].mul(phi));
    }
    let basis: Vec<QPoly> = (0..=k).map(|i| psi_pows[i].mul(&phi_pows[k - i])).collect();
    // unknowns: alpha_0..alpha_k, beta_0..beta_k
    let mut columns: Vec<QPoly> = basis.iter().map(|b| f.den().mul(b).neg()).collect();
    columns.extend(basis.iter().map(|b| f.num().mul(b)));
    let kernel = linalg::rational_kernel(&poly_matrix(&columns), columns.len());
    for v in kernel {
        let a = UniPoly::from_rationals(v[..=k].to_vec());
        let b = UniPoly::from_rationals(v[k + 1..].to_vec());
        if b.is_zero() {
            continue;
        }
        let r = UniRationalFunction::new(a, b)?;
        if r.degree() == 0 {
            continue;
        }
        if matches!(compose(&r, g), Ok(h) if h == *f) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Rows indexed by monomials, one column per polynomial.
fn poly_matrix(columns: &[QPoly]) -> Vec<Vec<BigRational>> {
    let mut monos: Vec<Monomial> = columns
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    monos
        .iter()
        .map(|m| columns.iter().map(|c| c.coefficient(&m.0)).collect())
        .collect()
}

/// `s` with `s∘f = g` when `g ∈ Q(f)`.
pub fn express_in_f(
    g: &RationalFunction,
    f: &RationalFunction,
    seed: u64,
) -> Result<Option<UniRationalFunction>, Error> {
    if g.is_constant() || f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if is_composite(f, seed)? {
        return Err(Error::CompositeBase);
    }
    if !g.degree().is_multiple_of(f.degree()) {
        return Ok(None);
    }
    solve_outer(g, f, g.degree() / f.degree())
}

/// Decomposes a composite bivariate fraction; `Ok(NotComposite)` otherwise.
pub fn decompose(f: &RationalFunction, seed: u64, budget: usize) -> Result<Decomposed, Error> {
    if f.nvars() != 2 {
        return Err(Error::WrongNvars {
            expected: "2",
            got: f.nvars(),
        });
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if generic_count(f, seed)? == 1 {
        return Ok(Decomposed::NotComposite);
    }
    let used = f.used_vars();
    if used.len() == 1 {
        let v = used[0];
        let outer = UniRationalFunction::new(f.num().to_upoly(v), f.den().to_upoly(v))?;
        let inner = RationalFunction::var(2, v);
        return Ok(Decomposed::Composite(Decomposition {
            outer,
            inner,
            field: "Q".into(),
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6465_636f_6d70_6f73);
    let mut notes = Vec::new();
    let mut found: Vec<QPoly> = Vec::new();
    for attempt in 0..budget {
        // the last attempt falls back to a generic fiber and conjugate factors
        let through_point = budget == 1 || attempt + 1 < budget;
        let factors = match fiber_factors(f, &mut rng, through_point) {
            Ok(fs) => fs,
            Err(why) => {
                notes.push(format!("attempt {}: {why}", attempt + 1));
                continue;
            }
        };
        if !through_point {
            found.clear();
        }
        for a in factors {
            found.push(a);
            if echelon_span(&found).len() > 2 {
                // a factor outside the pencil, e.g. from a reducible member of g
                found = vec![found.pop().expect("just pushed")];
            }
        }
        let basis = echelon_span(&found);
        if basis.len() < 2 {
            notes.push(format!("attempt {}: pencil not yet spanned", attempt + 1));
            continue;
        }
        match finish(f, &basis) {
            Ok(d) => return Ok(Decomposed::Composite(d)),
            Err(why) => {
                notes.push(format!("attempt {}: {why}", attempt + 1));
                found.clear();
            }
        }
    }
    Err(Error::ExtractionFailed(notes.join("; ")))
}

/// Coordinates over `Q` of the absolute factors of one fiber, mapped back to
/// the original variables.
///
/// With `through_point` the fiber is `f = f(P)` for a random integer point
/// `P`; it contains the rational factor `ψ - g(P) φ`, which is the only one
/// returned. Otherwise `λ0` is a random integer and conjugate
/// factors are computed over `Q[c]/(e)` by dynamic evaluation.
fn fiber_factors(
    f: &RationalFunction,
    rng: &mut ChaCha8Rng,
    through_point: bool,
) -> Result<Vec<QPoly>, String> {
    let err = |e: Error| e.to_string();
    let (s, t) = loop {
        let s: i64 = rng.gen_range(-5..=5);
        let t: i64 = rng.gen_range(-5..=5);
        if s * t != 1 {
            break (s, t);
        }
    };
    let x = MPoly::var(Rationals, 2, 0);
    let y = MPoly::var(Rationals, 2, 1);
    let q = |n: i64| BigRational::from_integer(n.into());
    let ft = f
        .substitute(&[x.add(&y.scale(&q(s))), x.scale(&q(t)).add(&y)])
        .map_err(err)?;
    let drop = degree_drop_value(&ft);
    let (lambda0, point) = loop {
        let (l, point) = if through_point {
            let point = [q(rng.gen_range(-9..=9)), q(rng.gen_range(-9..=9))];
            let den = ft.den().eval(&point);
            if den.is_zero() {
                continue;
            }
            (ft.num().eval(&point) / den, Some(point))
        } else {
            (q(rng.gen_range(-50..=50)), None)
        };
        if drop.as_ref() != Some(&l) {
            break (l, point);
        }
    };
    let fiber = ft.member(&lambda0).monic().map_err(|e| e.to_string())?;
    if fiber.total_degree() != Some(f.degree()) {
        return Err("fiber lost degree".into());
    }
    let fx = fiber.partial(0);
    let fy = fiber.partial(1);
    let coprime = |a: &QPoly| fiber.gcd(a).map(|g| g.is_constant()).unwrap_or(false);
    if !coprime(&fx) || !coprime(&fy) {
        return Err("fiber not squarefree or has a factor in one variable".into());
    }
    let sys = GaoSystem::for_poly(&fiber);
    let kernel = linalg::rational_kernel(&sys.rows, sys.ncols());
    if kernel.len() < 2 {
        return Err(format!("fiber at {lambda0} is irreducible"));
    }
    let mut v = vec![BigRational::zero(); sys.ncols()];
    for b in &kernel {
        let w = q(rng.gen_range(-20..=20));
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += &w * bi;
        }
    }
    let gstar = sys.g_part(&Rationals, &v);
    // back to the original coordinates: (x, y) -> ((x - s y)/d, (y - t x)/d)
    let d = q(1 - s * t);
    let inv = [
        x.sub(&y.scale(&q(s))).scale(&(BigRational::one() / &d)),
        y.sub(&x.scale(&q(t))).scale(&(BigRational::one() / &d)),
    ];
    if let Some(point) = point {
        // G* - c F_x vanishes on the factor through P, which fixes c
        let fx_p = fx.eval(&point);
        if fx_p.is_zero() {
            return Err("F_x vanishes at the chosen point".into());
        }
        let c = gstar.eval(&point) / fx_p;
        let factor = fiber
            .gcd(&gstar.sub(&fx.scale(&c)))
            .map_err(|e| e.to_string())?;
        if factor.is_constant() || factor.total_degree() == fiber.total_degree() {
            return Err("factor values coincide".into());
        }
        return Ok(vec![factor.substitute(&inv)]);
    }
    let resolvent = resolvent(&fiber, &gstar, &fx).ok_or("resolvent vanishes")?;
    if resolvent.degree() < Some(2) {
        return Err("factor values coincide".into());
    }
    let mut span: Vec<QPoly> = Vec::new();
    for e in split_rational_roots(coprime_basis(&[resolvent])) {
        if e.degree() == Some(1) {
            let c = -e.coeff(0);
            let h = gstar.sub(&fx.scale(&c));
            span.push(fiber.gcd(&h).map_err(|e| e.to_string())?);
            continue;
        }
        let branches = split_run(&e, |k| {
            let a = k.generator();
            let h = gstar.promote(k).sub(&fx.promote(k).scale(&a));
            fiber.promote(k).gcd(&h)
        })
        .map_err(err)?;
        for (k, fi) in branches {
            for j in 0..k.degree() {
                span.push(fi.map_field(Rationals, |c| c.coeff(j)));
            }
        }
    }
    Ok(span.iter().map(|b| b.substitute(&inv)).collect())
}

/// Inner fraction from an echelon basis of the pencil, then the outer one.
fn finish(f: &RationalFunction, basis: &[QPoly]) -> Result<Decomposition, String> {
    if basis.len() != 2 {
        return Err(format!("factor coordinates span dimension {}", basis.len()));
    }
    let inner =
        RationalFunction::new(basis[0].clone(), basis[1].clone()).map_err(|e| e.to_string())?;
    if inner.is_constant() || !f.degree().is_multiple_of(inner.degree()) {
        return Err("inner candidate has the wrong degree".into());
    }
    let k = f.degree() / inner.degree();
    if k < 2 {
        return Err("inner candidate has full degree".into());
    }
    let outer = solve_outer(f, &inner, k)
        .map_err(|e| e.to_string())?
        .ok_or("no outer fraction for the inner candidate")?;
    Ok(Decomposition {
        outer,
        inner,
        field: "Q".into(),
    })
}

/// Squarefree gcd over a few vertical lines of `Res_y(F, G* - c F_x)`,
/// whose roots are the values `c_i`.
fn resolvent(fiber: &QPoly, gstar: &QPoly, fx: &QPoly) -> Option<UniPoly<Rationals>> {
    let n = fiber.degree_in(1)?;
    let lead = fiber.coeff_in(1, n as u32);
    let mut acc: Option<UniPoly<Rationals>> = None;
    let mut found = 0;
    for xk in [1i64, -2, 3, -4, 5, 7, -8, 11] {
        let xv = BigRational::from_integer(xk.into());
        if lead.eval_var(0, &xv).is_zero() {
            continue;
        }
        let a = fiber.eval_var(0, &xv).to_upoly(1);
        let g0 = gstar.eval_var(0, &xv).to_upoly(1);
        let g1 = fx.eval_var(0, &xv).to_upoly(1);
        let cs: Vec<BigRational> = (0..=n as i64)
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        let vals: Vec<BigRational> = cs
            .iter()
            .map(|c| {
                let b = g0.sub(&g1.scale(c));
                linalg::resultant(&Rationals, a.coeffs(), n, b.coeffs(), n).expect("over Q")
            })
            .collect();
        let r = UniPoly::interpolate(&cs, &vals);
        if r.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => r,
            Some(g) => g.gcd(&r).ok()?,
        });
        found += 1;
        if found == 2 {
            break;
        }
    }
    acc?.squarefree_part().ok()
}

/// Reduced echelon basis of the span of `polys`, leading monomials
/// descending, each basis element monic.
fn echelon_span(polys: &[QPoly]) -> Vec<QPoly> {
    let nonzero: Vec<QPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return vec![];
    }
    let nvars = nonzero[0].nvars();
    let mut monos: Vec<Monomial> = nonzero
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    monos.reverse();
    // rows are polynomials, columns monomials in descending order
    let rows: Vec<Vec<BigRational>> = nonzero
        .iter()
        .map(|p| monos.iter().map(|m| p.coefficient(&m.0)).collect())
        .collect();
    // row space basis = transpose kernel trick avoided: eliminate directly
    let mut m = rows;
    let mut out = Vec::new();
    let mut r = 0;
    for c in 0..monos.len() {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    for row in m.iter().take(r) {
        out.push(MPoly::from_terms(
            Rationals,
            nvars,
            monos
                .iter()
                .zip(row)
                .map(|(mono, c)| (mono.0.clone(), c.clone())),
        ));
    }
    out
}

/// The unreduced pair `(a(g), b(g))` for tests that need the raw parts.
pub fn composition_pair(r: &UniRationalFunction, g: &RationalFunction) -> (QPoly, QPoly) {
    composition_parts(r, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::ratfunc::jacobian_derivation;

    fn x() -> QPoly {
        MPoly::var(Rationals, 2, 0)
    }
    fn y() -> QPoly {
        MPoly::var(Rationals, 2, 1)
    }
    fn c(n: i64) -> QPoly {
        MPoly::constant(Rationals, 2, rat(n))
    }
    fn rf(p: QPoly, q: QPoly) -> RationalFunction {
        RationalFunction::new(p, q).unwrap()
    }
    fn t(cs: &[i64]) -> UniPoly<Rationals> {
        UniPoly::from_ints(cs)
    }
    fn lorenzini() -> RationalFunction {
        let s = c(1).add(&x()).add(&y());
        rf(
            x().pow(3).add(&y().pow(3)).add(&s.pow(3)),
            x().mul(&y()).mul(&s),
        )
    }

    #[test]
    fn compositeness_examples() {
        assert!(is_composite(&rf(x().pow(2), y().pow(2)), 0).unwrap());
        assert!(!is_composite(&rf(x(), y()), 0).unwrap());
        assert!(!is_composite(&lorenzini(), 0).unwrap());
    }

    #[test]
    fn solve_outer_examples() {
        let g = rf(x(), y());
        let r = solve_outer(&rf(x().pow(2), y().pow(2)), &g, 2)
            .unwrap()
            .unwrap();
        assert_eq!(r, UniRationalFunction::from_poly(t(&[0, 0, 1])));
        let f = rf(x().pow(2).add(&y().pow(2)), x().mul(&y()));
        let r = solve_outer(&f, &g, 2).unwrap().unwrap();
        assert_eq!(
            r,
            UniRationalFunction::new(t(&[1, 0, 1]), t(&[0, 1])).unwrap()
        );
        let r = solve_outer(&g, &rf(y(), x()), 1).unwrap().unwrap();
        assert_eq!(r, UniRationalFunction::new(t(&[1]), t(&[0, 1])).unwrap());
        assert_eq!(
            solve_outer(&lorenzini(), &g, 2),
            Err(Error::DegreeMismatch { outer: 3, inner: 1 })
        );
        assert_eq!(
            solve_outer(&lorenzini(), &rf(x().add(&y()), c(1)), 3).unwrap(),
            None
        );
    }

    fn round_trip(f: &RationalFunction) -> Decomposition {
        match decompose(f, 7, RETRY_BUDGET).unwrap() {
            Decomposed::Composite(d) => {
                assert!(d.outer.degree() >= 2);
                assert_eq!(&compose(&d.outer, &d.inner).unwrap(), f);
                d
            }
            Decomposed::NotComposite => panic!("{f} reported non-composite"),
        }
    }

    #[test]
    fn decompose_examples() {
        let d = round_trip(&rf(x().pow(2), y().pow(2)));
        assert_eq!(d.inner, rf(x(), y()));
        let s = x().add(&y());
        let d = round_trip(&rf(s.pow(2).add(&c(1)), s.clone()));
        assert_eq!(d.inner, rf(s, c(1)));
        let xy = x().mul(&y());
        let d = round_trip(&rf(xy.pow(2).add(&c(1)), xy.clone()));
        assert_eq!(d.inner, rf(xy, c(1)));
        assert_eq!(
            decompose(&lorenzini(), 0, 2).unwrap(),
            Decomposed::NotComposite
        );
    }

    #[test]
    fn decompose_one_variable_and_irrational_fibers() {
        let d = round_trip(&rf(x().pow(3).add(&x()), c(1)));
        assert_eq!(d.inner, rf(x(), c(1)));
        // fiber factors x^2 + y^2 - t are conjugate over Q(sqrt(λ0))
        let g = rf(x().pow(2).add(&y().pow(2)), x().add(&c(2)));
        let r = UniRationalFunction::new(t(&[1, 0, 3]), t(&[0, 1])).unwrap();
        round_trip(&compose(&r, &g).unwrap());
    }

    #[test]
    fn conjugate_factors_span_the_pencil() {
        // r(t) = λ0 has no rational root for most λ0 when r = t^3 + t
        let g = rf(x().pow(2).add(&y()), x().add(&c(2)));
        let r = UniRationalFunction::from_poly(t(&[0, 1, 0, 1]));
        let f = compose(&r, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let factors = (0..4)
            .find_map(|_| fiber_factors(&f, &mut rng, false).ok())
            .unwrap();
        let d = finish(&f, &echelon_span(&factors)).unwrap();
        assert_eq!(d.inner, g);
        assert_eq!(compose(&d.outer, &d.inner).unwrap(), f);
    }

    #[test]
    fn express_examples() {
        let f = rf(x(), y());
        assert_eq!(
            express_in_f(&rf(x().pow(2), y().pow(2)), &f, 0).unwrap(),
            Some(UniRationalFunction::from_poly(t(&[0, 0, 1])))
        );
        assert_eq!(
            express_in_f(&rf(x().pow(2).add(&y().pow(2)), x().mul(&y())), &f, 0).unwrap(),
            Some(UniRationalFunction::new(t(&[1, 0, 1]), t(&[0, 1])).unwrap())
        );
        assert_eq!(express_in_f(&rf(x(), c(1)), &f, 0).unwrap(), None);
        assert!(!jacobian_derivation(&f, &rf(x(), c(1))).unwrap().is_zero());
        assert_eq!(
            express_in_f(&f, &rf(x().pow(2), y().pow(2)), 0),
            Err(Error::CompositeBase)
        );
    }
}
