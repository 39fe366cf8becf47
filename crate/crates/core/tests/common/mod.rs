#![allow(dead_code)]

use num_rational::BigRational;
use pencil_core::field::rat;
use pencil_core::ratfunc::{compose, RationalFunction, UniRationalFunction};
use pencil_core::{MPoly, QPoly, Rationals, UniPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense-ish random polynomial of total degree at most `deg` with
/// coefficients in `[-c, c]`; each monomial is kept with probability 1/2.
pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, c: i64) -> QPoly {
    let mut terms = Vec::new();
    let mut push = |e: Vec<u32>, rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            terms.push((e, rat(rng.gen_range(-c..=c))));
        }
    };
    match nvars {
        2 => {
            for i in 0..=deg {
                for j in 0..=deg - i {
                    push(vec![i, j], rng);
                }
            }
        }
        _ => unimplemented!("bivariate only"),
    }
    MPoly::from_terms(Rationals, nvars, terms)
}

/// Random bivariate fraction of degree exactly `deg`.
pub fn random_fraction(rng: &mut ChaCha8Rng, deg: usize) -> RationalFunction {
    loop {
        let p = random_poly(rng, 2, deg as u32, 4);
        let q = if rng.gen_bool(0.3) {
            MPoly::one(Rationals, 2)
        } else {
            {
                let d = rng.gen_range(1..=deg as u32);
                random_poly(rng, 2, d, 4)
            }
        };
        if q.is_zero() {
            continue;
        }
        if let Ok(f) = RationalFunction::new(p, q) {
            if f.degree() == deg {
                return f;
            }
        }
    }
}

/// Random univariate fraction of degree exactly `deg`.
pub fn random_outer(rng: &mut ChaCha8Rng, deg: usize) -> UniRationalFunction {
    loop {
        let coeffs = |d: usize, rng: &mut ChaCha8Rng| -> UniPoly<Rationals> {
            UniPoly::from_ints(&(0..=d).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
        };
        let a = coeffs(deg, rng);
        let b = if rng.gen_bool(0.4) {
            UniPoly::one(Rationals)
        } else {
            {
                let d = rng.gen_range(0..=deg);
                coeffs(d, rng)
            }
        };
        if b.is_zero() {
            continue;
        }
        if let Ok(r) = UniRationalFunction::new(a, b) {
            if r.degree() == deg {
                return r;
            }
        }
    }
}

/// `r∘g` with `deg r ∈ {2, 3}` and `deg g ∈ {1, 2}`.
pub fn random_composite(
    rng: &mut ChaCha8Rng,
) -> (UniRationalFunction, RationalFunction, RationalFunction) {
    loop {
        let deg = rng.gen_range(2..=3);
        let r = random_outer(rng, deg);
        let deg = rng.gen_range(1..=2);
        let g = random_fraction(rng, deg);
        if g.used_vars().len() < 2 {
            continue;
        }
        if let Ok(f) = compose(&r, &g) {
            return (r, g, f);
        }
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(
        rng.gen_range(-num..=num).into(),
        rng.gen_range(1..=den).into(),
    )
}

/// Product of pairwise non-proportional affine forms `a x + b y + c`.
pub fn random_lines(rng: &mut ChaCha8Rng, k: usize) -> Vec<[i64; 3]> {
    let mut out: Vec<[i64; 3]> = Vec::new();
    while out.len() < k {
        let l = [
            rng.gen_range(-4..=4),
            rng.gen_range(-4..=4),
            rng.gen_range(-4..=4),
        ];
        if l[0] == 0 && l[1] == 0 {
            continue;
        }
        let proportional = |m: &[i64; 3]| {
            // all 2x2 minors vanish
            l[0] * m[1] == l[1] * m[0] && l[0] * m[2] == l[2] * m[0] && l[1] * m[2] == l[2] * m[1]
        };
        if out.iter().any(proportional) {
            continue;
        }
        out.push(l);
    }
    out
}

pub fn line(l: &[i64; 3]) -> QPoly {
    MPoly::from_int_terms(2, &[(&[1, 0], l[0]), (&[0, 1], l[1]), (&[0, 0], l[2])])
}
