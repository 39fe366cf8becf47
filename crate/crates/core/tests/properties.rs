mod common;

use common::*;
use num_traits::Zero;
use pencil_core::analysis::{analyze, Options};
use pencil_core::decomp::{decompose, express_in_f, is_composite, Decomposed, RETRY_BUDGET};
use pencil_core::field::{rat, Field};
use pencil_core::irrcount::count_abs_irred;
use pencil_core::linalg::resultant;
use pencil_core::parse::{default_vars, parse};
use pencil_core::ratfunc::{compose, jacobian_derivation};
use pencil_core::spectrum::{analyze_spectrum, Rho};
use pencil_core::{MPoly, NumberField, Rationals, UniPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parser_round_trip(seed in any::<u64>(), deg in 1usize..=4) {
        let f = random_fraction(&mut rng(seed), deg);
        for names in [vec!["x".to_string(), "y".to_string()], vec!["u_1".into(), "velocity".into()]] {
            let text = f.to_string_with(&names);
            prop_assert_eq!(parse(&text, &names).unwrap(), f.clone(), "{}", text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_and_gcd(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_poly(&mut r, 2, 2, 5);
        let b = random_poly(&mut r, 2, 2, 5);
        let h = random_poly(&mut r, 2, 2, 5);
        prop_assert_eq!(a.add(&b).mul(&h), a.mul(&h).add(&b.mul(&h)));
        prop_assume!(!h.is_zero() && !(a.is_zero() && b.is_zero()));
        let g = a.mul(&h).gcd(&b.mul(&h)).unwrap();
        prop_assert!(a.mul(&h).div_exact(&g).unwrap().is_some());
        prop_assert!(b.mul(&h).div_exact(&g).unwrap().is_some());
        prop_assert!(g.div_exact(&h).unwrap().is_some());
        let sq = a.mul(&a).mul(&h);
        prop_assume!(!sq.is_zero());
        let part = sq.squarefree_part().unwrap();
        prop_assert!(sq.div_exact(&part).unwrap().is_some());
        let n = sq.total_degree().unwrap().max(1) as u32;
        prop_assert!(part.pow(n).div_exact(&sq).unwrap().is_some());
        let (px, py) = (part.partial(0), part.partial(1));
        prop_assert!(part.gcd(&px).unwrap().gcd(&py).unwrap().is_constant());
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut poly = |d: usize| UniPoly::from_ints(&(0..=d).map(|_| r.gen_range(-4..=4)).collect::<Vec<_>>());
        let (a, b, c) = (poly(2), poly(2), poly(1));
        prop_assume!(a.degree() == Some(2) && b.degree() == Some(2) && c.degree() == Some(1));
        let res = |p: &UniPoly<Rationals>, q: &UniPoly<Rationals>| {
            resultant(&Rationals, p.coeffs(), p.degree().unwrap(), q.coeffs(), q.degree().unwrap()).unwrap()
        };
        prop_assert!(res(&a.mul(&c), &b.mul(&c)).is_zero());
        prop_assert_eq!(res(&a, &b).is_zero(), !a.gcd(&b).unwrap().is_constant());
    }

    #[test]
    fn number_field_inverses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = NumberField::new(UniPoly::from_ints(&[-2, 0, 0, 1])).unwrap();
        let a = k.element(UniPoly::from_ints(&[r.gen_range(-9..=9), r.gen_range(-9..=9), r.gen_range(-9..=9)]));
        prop_assume!(!k.is_zero(&a));
        let inv = k.inv(&a).unwrap();
        prop_assert!(k.is_one(&k.mul(&a, &inv)));
    }

    #[test]
    fn line_arrangements_count_their_lines(seed in any::<u64>(), k in 1usize..=4, repeat in any::<bool>()) {
        let mut r = rng(seed);
        let lines = random_lines(&mut r, k);
        let mut p = MPoly::one(Rationals, 2);
        for (i, l) in lines.iter().enumerate() {
            p = p.mul(&line(l).pow(if repeat && i == 0 { 2 } else { 1 }));
        }
        prop_assert_eq!(count_abs_irred(&p).unwrap(), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_round_trip(seed in any::<u64>()) {
        let (_, _, f) = random_composite(&mut rng(seed));
        match decompose(&f, seed, RETRY_BUDGET).unwrap() {
            Decomposed::Composite(d) => {
                prop_assert!(d.outer.degree() >= 2);
                prop_assert_eq!(compose(&d.outer, &d.inner).unwrap(), f);
            }
            Decomposed::NotComposite => prop_assert!(false, "{} reported non-composite", f),
        }
    }

    #[test]
    fn composite_fibers_are_reducible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, _, f) = random_composite(&mut r);
        let lambda = random_rational(&mut r, 50, 5);
        let member = f.member(&lambda);
        let reduced = member.squarefree_part().unwrap();
        prop_assume!(member.total_degree() == Some(f.degree()) && reduced.total_degree() == member.total_degree());
        prop_assert!(count_abs_irred(&member).unwrap() >= 2);
    }

    #[test]
    fn composite_iff_infinite_rho(seed in any::<u64>(), make_composite in any::<bool>()) {
        let mut r = rng(seed);
        let f = if make_composite { random_composite(&mut r).2 } else { random_fraction(&mut r, 3) };
        let report = analyze_spectrum(&f, seed).unwrap();
        prop_assert_eq!(is_composite(&f, seed).unwrap(), report.rho == Rho::Infinite);
        prop_assert_eq!(report.composite, report.rho == Rho::Infinite);
        if make_composite {
            prop_assert!(report.composite);
        }
    }

    #[test]
    fn express_recovers_outer(seed in any::<u64>()) {
        let mut r = rng(seed);
        let deg = r.gen_range(1..=2);
        let f = random_fraction(&mut r, deg);
        prop_assume!(!is_composite(&f, seed).unwrap());
        let deg = r.gen_range(1..=3);
        let s = random_outer(&mut r, deg);
        let g = compose(&s, &f).unwrap();
        prop_assert!(jacobian_derivation(&f, &g).unwrap().is_zero());
        prop_assert_eq!(express_in_f(&g, &f, seed).unwrap(), Some(s));
    }

    #[test]
    fn spectrum_size_and_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let deg = r.gen_range(1..=3);
        let f = random_fraction(&mut r, deg);
        let report = analyze_spectrum(&f, seed).unwrap();
        prop_assume!(!report.composite);
        let Rho::Finite(rho) = report.rho else { unreachable!() };
        prop_assert!(report.spectrum_size() <= rho);
        prop_assert!(rho < deg * deg);
        if f.is_polynomial() {
            prop_assert!(rho < deg);
        }
        prop_assert!(!report.bounds.any_failed());
        for e in &report.entries {
            prop_assert!(e.n >= 2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_fraction(&mut r, 3);
        let vars = default_vars(2);
        let options = Options { seed, ..Options::default() };
        let a = analyze(&f, &vars, &options).unwrap().to_json().to_string();
        let b = analyze(&f, &vars, &options).unwrap().to_json().to_string();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn constants_have_zero_derivation() {
    let f = parse("(x^2 + y)/(x - y)", &default_vars(2)).unwrap();
    let c = pencil_core::ratfunc::RationalFunction::constant(2, rat(5));
    assert!(jacobian_derivation(&f, &c).unwrap().is_zero());
}
