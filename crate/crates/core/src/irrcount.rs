//! Counting absolutely irreducible factors of bivariate polynomials through
//! the Gao linear system, and locating the pencil members where the count
//! can jump.
//!
//! For squarefree `F` of bidegree `(m, n)` the system
//! `G_y F - G F_y - H_x F + H F_x = 0` with `deg G <= (m-1, n)` and
//! `deg H <= (m, n-1)` has one solution `(F/F_i) * (F_i,x, F_i,y)` for every
//! absolutely irreducible factor `F_i`, and these span its kernel.

use std::any::Any;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::{Field, Rationals};
use crate::linalg::{self, bareiss, modular};
use crate::mpoly::{MPoly, QPoly};
use crate::ratfunc::RationalFunction;
use crate::upoly::{coprime_basis, split_rational_roots, UniPoly};

/// The Gao system of a bivariate polynomial for a declared bidegree.
#[derive(Clone, Debug)]
pub struct GaoSystem<F: Field> {
    pub m: usize,
    pub n: usize,
    /// Rows indexed by the monomials `x^i y^j`, `i < 2m`, `j < 2n`.
    pub rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> GaoSystem<F> {
    /// Builds the system of `f` with bidegree bounds `(m, n)`; `f` must fit.
    pub fn new(f: &MPoly<F>, m: usize, n: usize) -> Self {
        assert_eq!(f.nvars(), 2);
        assert!(m >= 1 && n >= 1);
        assert!(f.degree_in(0).unwrap_or(0) <= m && f.degree_in(1).unwrap_or(0) <= n);
        let field = f.field().clone();
        let ncols = Self::ncols_for(m, n);
        let mut rows = vec![vec![field.zero(); ncols]; 4 * m * n];
        let fx = f.partial(0);
        let fy = f.partial(1);
        let row = |i: usize, j: usize| i * 2 * n + j;
        let put = |rows: &mut Vec<Vec<F::Elem>>, r: usize, c: usize, v: F::Elem| {
            rows[r][c] = field.add(&rows[r][c], &v);
        };
        let gcols = m * (n + 1);
        for a in 0..m {
            for b in 0..=n {
                let col = a * (n + 1) + b;
                if b > 0 {
                    let s = f.field().from_int(b as i64);
                    for (e, c) in f.terms() {
                        let r = row(a + e.0[0] as usize, b - 1 + e.0[1] as usize);
                        put(&mut rows, r, col, f.field().mul(&s, c));
                    }
                }
                for (e, c) in fy.terms() {
                    let r = row(a + e.0[0] as usize, b + e.0[1] as usize);
                    put(&mut rows, r, col, f.field().neg(c));
                }
            }
        }
        for a in 0..=m {
            for b in 0..n {
                let col = gcols + a * n + b;
                if a > 0 {
                    let s = f.field().from_int(-(a as i64));
                    for (e, c) in f.terms() {
                        let r = row(a - 1 + e.0[0] as usize, b + e.0[1] as usize);
                        put(&mut rows, r, col, f.field().mul(&s, c));
                    }
                }
                for (e, c) in fx.terms() {
                    let r = row(a + e.0[0] as usize, b + e.0[1] as usize);
                    put(&mut rows, r, col, c.clone());
                }
            }
        }
        GaoSystem { m, n, rows }
    }

    /// System of `f` at its own bidegree.
    pub fn for_poly(f: &MPoly<F>) -> Self {
        Self::new(f, f.degree_in(0).unwrap_or(0), f.degree_in(1).unwrap_or(0))
    }

    pub fn ncols_for(m: usize, n: usize) -> usize {
        m * (n + 1) + (m + 1) * n
    }

    pub fn ncols(&self) -> usize {
        Self::ncols_for(self.m, self.n)
    }

    /// Column of the `G` coefficient of `x^a y^b`.
    pub fn g_col(&self, a: usize, b: usize) -> usize {
        a * (self.n + 1) + b
    }

    /// Column of the `H` coefficient of `x^a y^b`.
    pub fn h_col(&self, a: usize, b: usize) -> usize {
        self.m * (self.n + 1) + a * self.n + b
    }

    /// `(G, H)` as a column vector.
    pub fn vector(&self, g: &MPoly<F>, h: &MPoly<F>) -> Vec<F::Elem> {
        let mut v = vec![g.field().zero(); self.ncols()];
        for (e, c) in g.terms() {
            v[self.g_col(e.0[0] as usize, e.0[1] as usize)] = c.clone();
        }
        for (e, c) in h.terms() {
            v[self.h_col(e.0[0] as usize, e.0[1] as usize)] = c.clone();
        }
        v
    }

    /// The `G` part of a column vector.
    pub fn g_part(&self, field: &F, v: &[F::Elem]) -> MPoly<F> {
        let mut terms = Vec::new();
        for a in 0..self.m {
            for b in 0..=self.n {
                terms.push((vec![a as u32, b as u32], v[self.g_col(a, b)].clone()));
            }
        }
        MPoly::from_terms(field.clone(), 2, terms)
    }
}

/// Number of distinct absolutely irreducible factors of a nonconstant
/// bivariate polynomial.
///
/// Over `Q` the kernel is computed modularly and verified exactly; over other
/// fields by elimination, where a zero divisor surfaces as an error for the
/// caller to split on.
pub fn count_abs_irred<F: Field>(f: &MPoly<F>) -> Result<usize, Error> {
    if f.nvars() != 2 {
        return Err(Error::WrongNvars {
            expected: "2",
            got: f.nvars(),
        });
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let sf = f.squarefree_part()?;
    if sf.used_vars().len() == 1 {
        return Ok(sf.total_degree().unwrap());
    }
    if let Some(q) = (&sf as &dyn Any).downcast_ref::<QPoly>() {
        let sys = GaoSystem::for_poly(q);
        return Ok(linalg::rational_nullity(&sys.rows, sys.ncols()));
    }
    let sys = GaoSystem::for_poly(&sf);
    let rank = linalg::field_rank(sf.field(), &sys.rows, sys.ncols())?;
    Ok(sys.ncols() - rank)
}

/// Bidegree of the generic member of the pencil of `f`.
fn formal_bidegree(f: &RationalFunction) -> (usize, usize) {
    let d = |v| {
        f.num()
            .degree_in(v)
            .unwrap_or(0)
            .max(f.den().degree_in(v).unwrap_or(0))
    };
    (d(0), d(1))
}

/// Integer form of the pencil matrix `A(λ) = A0 - λ A1` built from the Gao
/// systems of `p` and `q` at the formal bidegree.
pub(crate) struct PencilMatrix {
    pub m: usize,
    pub n: usize,
    pub a0: Vec<Vec<BigInt>>,
    pub a1: Vec<Vec<BigInt>>,
}

impl PencilMatrix {
    pub fn new(f: &RationalFunction) -> Self {
        let (m, n) = formal_bidegree(f);
        let s0 = GaoSystem::new(f.num(), m, n);
        let s1 = GaoSystem::new(f.den(), m, n);
        let mut a0 = Vec::new();
        let mut a1 = Vec::new();
        for (r0, r1) in s0.rows.iter().zip(&s1.rows) {
            if r0.iter().chain(r1).all(Zero::is_zero) {
                continue;
            }
            let mut den = BigInt::one();
            for x in r0.iter().chain(r1) {
                den = den.lcm(x.denom());
            }
            let scale = |r: &Vec<BigRational>| -> Vec<BigInt> {
                r.iter().map(|x| x.numer() * (&den / x.denom())).collect()
            };
            a0.push(scale(r0));
            a1.push(scale(r1));
        }
        PencilMatrix { m, n, a0, a1 }
    }

    pub fn ncols(&self) -> usize {
        GaoSystem::<Rationals>::ncols_for(self.m, self.n)
    }

    fn rows_mod(&self, lambda: u64, p: u64) -> Vec<Vec<u64>> {
        self.a0
            .iter()
            .zip(&self.a1)
            .map(|(r0, r1)| {
                r0.iter()
                    .zip(r1)
                    .map(|(x, y)| {
                        let v = modular::mul_mod(modular::reduce(y, p), lambda, p);
                        (modular::reduce(x, p) + p - v) % p
                    })
                    .collect()
            })
            .collect()
    }

    /// Kernel dimension of `A(λ)` at a random point modulo a large prime,
    /// an upper bound for the kernel dimension over `Q(λ)`.
    fn nullity_at_random_point(&self, rng: &mut ChaCha8Rng, prime_index: usize) -> usize {
        let p = modular::primes()[prime_index % modular::primes().len()];
        let lambda = rng.gen_range(0..p);
        self.ncols() - modular::rank(&self.rows_mod(lambda, p), self.ncols(), p)
    }
}

/// Number of absolutely irreducible factors of `p - λq` for transcendental
/// `λ`; a value above 1 means `f` is composite.
///
/// The kernel of the pencil system over `Q(λ)` is measured at random points
/// modulo large primes. Specialization can only lower the rank, so a count
/// of 1 is certain, and a larger count is wrong only with negligible
/// probability.
pub fn generic_count(f: &RationalFunction, seed: u64) -> Result<usize, Error> {
    if f.nvars() != 2 {
        return Err(Error::WrongNvars {
            expected: "2",
            got: f.nvars(),
        });
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.used_vars().len() == 1 {
        return Ok(f.degree());
    }
    let pm = PencilMatrix::new(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6765_6e65_7269_6321);
    let mut best = usize::MAX;
    for trial in 0..2 {
        best = best.min(pm.nullity_at_random_point(&mut rng, trial));
        if best == 1 {
            break;
        }
    }
    Ok(best)
}

/// Candidate spectrum values of a non-composite `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    /// Monic, squarefree, pairwise coprime; each stands for all its roots.
    pub finite_candidates: Vec<UniPoly<Rationals>>,
    pub include_infinity: bool,
    /// The finite `λ` with `deg(p - λq) < deg f`, if any.
    pub degree_drop_candidate: Option<BigRational>,
}

/// The `λ` with `deg(p - λq) < deg f`, if there is one.
pub fn degree_drop_value(f: &RationalFunction) -> Option<BigRational> {
    let dp = f.num().total_degree();
    let dq = f.den().total_degree().unwrap_or(0);
    match dp {
        None => Some(BigRational::zero()),
        Some(dp) if dp < dq => Some(BigRational::zero()),
        Some(dp) if dp == dq => {
            let lp = f.num().leading_homogeneous();
            let lq = f.den().leading_homogeneous();
            let c = lp.lc().unwrap() / lq.lc().unwrap();
            (lp == lq.scale(&c)).then_some(c)
        }
        _ => None,
    }
}

/// A set of `λ` containing every finite spectrum value of `f`, with `∞`
/// flagged separately.
///
/// On the pencil matrix `A(λ)` the vector `(F_x, F_y)` is always in the
/// kernel, and every finite spectrum value is a point where the kernel grows.
/// After deleting one column where that vector is nonzero, those are common
/// roots of the maximal minors; their gcd is bounded by the gcd of a few
/// random combinations `det(M A'(λ))`, which by Cauchy-Binet are divisible
/// by it. Resultant-based non-squarefree values and the degree-drop value
/// are added as well.
pub fn spectral_candidates(f: &RationalFunction, seed: u64) -> Result<CandidateSet, Error> {
    let gc = generic_count(f, seed)?;
    if gc > 1 {
        return Err(Error::CompositeInput(gc));
    }
    let include_infinity = f.den().total_degree().unwrap_or(0) >= 1;
    let drop = degree_drop_value(f);
    let mut polys: Vec<UniPoly<Rationals>> = Vec::new();
    if let Some(c) = &drop {
        polys.push(UniPoly::from_roots(std::slice::from_ref(c)));
    }
    if f.used_vars().len() == 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6361_6e64_6964_6174);
        let pm = PencilMatrix::new(f);
        let (minors, extra) = minors_gcd(f, &pm, &mut rng)?;
        polys.push(minors);
        polys.extend(extra);
        polys.extend(nonsquarefree_detector(f));
    }
    let finite_candidates = split_rational_roots(coprime_basis(&polys));
    Ok(CandidateSet {
        finite_candidates,
        include_infinity,
        degree_drop_candidate: drop,
    })
}

/// Gcd of random maximal minors of the pencil matrix with one column
/// removed, plus the root of the removed column's kernel entry when it has one.
fn minors_gcd(
    f: &RationalFunction,
    pm: &PencilMatrix,
    rng: &mut ChaCha8Rng,
) -> Result<(UniPoly<Rationals>, Option<UniPoly<Rationals>>), Error> {
    let sys = GaoSystem::<Rationals> {
        m: pm.m,
        n: pm.n,
        rows: vec![],
    };
    let (p, q) = (f.num(), f.den());
    let v0 = sys.vector(&p.partial(0), &p.partial(1));
    let v1 = sys.vector(&q.partial(0), &q.partial(1));
    let ncols = pm.ncols();
    let (skip, extra) = match (0..ncols).find(|&j| v1[j].is_zero() && !v0[j].is_zero()) {
        Some(j) => (j, None),
        None => {
            let j = (0..ncols)
                .find(|&j| !v1[j].is_zero())
                .ok_or_else(|| Error::Internal("pencil kernel vector vanishes".into()))?;
            (j, Some(UniPoly::from_roots(&[&v0[j] / &v1[j]])))
        }
    };
    let keep: Vec<usize> = (0..ncols).filter(|&j| j != skip).collect();
    let r = keep.len();
    let nrows = pm.a0.len();
    let mut g: Option<UniPoly<Rationals>> = None;
    let mut stale = 0;
    let mut zero_draws = 0;
    for _ in 0..8 {
        let mix: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..nrows).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let combine = |a: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            mix.iter()
                .map(|w| {
                    keep.iter()
                        .map(|&j| {
                            let mut acc = BigInt::zero();
                            for (k, &wk) in w.iter().enumerate() {
                                if wk != 0 && !a[k][j].is_zero() {
                                    acc += &a[k][j] * wk;
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        let b0 = combine(&pm.a0);
        let b1 = combine(&pm.a1);
        let det = pencil_determinant(&b0, &b1);
        if det.is_zero() {
            zero_draws += 1;
            if zero_draws >= 3 {
                return Err(Error::Internal("pencil minors vanish identically".into()));
            }
            continue;
        }
        let next = match &g {
            None => det.monic()?,
            Some(g) => g.gcd(&det)?,
        };
        let shrank = g.as_ref().is_none_or(|g| next.degree() < g.degree());
        g = Some(next);
        if shrank {
            stale = 0;
        } else {
            stale += 1;
            if stale >= 2 || g.as_ref().unwrap().is_constant() {
                break;
            }
        }
    }
    let g = g.ok_or_else(|| Error::Internal("no usable minor".into()))?;
    Ok((g, extra))
}

/// `det(B0 - λ B1)` by evaluation at integer points and interpolation.
fn pencil_determinant(b0: &[Vec<BigInt>], b1: &[Vec<BigInt>]) -> UniPoly<Rationals> {
    let r = b0.len();
    let xs: Vec<BigRational> = (0..=r as i64)
        .map(|i| BigRational::from_integer(i.into()))
        .collect();
    let ys: Vec<BigRational> = (0..=r as i64)
        .map(|l| {
            let m: Vec<Vec<BigInt>> = b0
                .iter()
                .zip(b1)
                .map(|(r0, r1)| r0.iter().zip(r1).map(|(x, y)| x - y * l).collect())
                .collect();
            BigRational::from_integer(bareiss::determinant(&m))
        })
        .collect();
    UniPoly::interpolate(&xs, &ys)
}

/// Values of `λ` where `p - λq` may fail to be squarefree: common roots of
/// `Res_y(F, F_y)` over a few vertical lines, and symmetrically in `x`.
fn nonsquarefree_detector(f: &RationalFunction) -> Vec<UniPoly<Rationals>> {
    let (m, n) = formal_bidegree(f);
    let mut out = Vec::new();
    for (var, other, deg) in [(1usize, 0usize, n), (0, 1, m)] {
        let mut acc: Option<UniPoly<Rationals>> = None;
        for s in [2i64, -3, 5] {
            let sv = BigRational::from_integer(s.into());
            let p = f.num().eval_var(other, &sv);
            let q = f.den().eval_var(other, &sv);
            let k = 2 * deg;
            let xs: Vec<BigRational> = (0..k as i64)
                .map(|i| BigRational::from_integer(i.into()))
                .collect();
            let ys: Vec<BigRational> = xs
                .iter()
                .map(|l| {
                    let fl = p.sub(&q.scale(l)).to_upoly(var);
                    let dl = fl.derivative();
                    let pad = |u: &UniPoly<Rationals>| u.coeffs().to_vec();
                    linalg::resultant(&Rationals, &pad(&fl), deg, &pad(&dl), deg - 1)
                        .expect("over Q")
                })
                .collect();
            let r = UniPoly::interpolate(&xs, &ys);
            if r.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => r.monic().unwrap(),
                Some(a) => a.gcd(&r).unwrap(),
            });
        }
        out.extend(acc);
    }
    out
}
