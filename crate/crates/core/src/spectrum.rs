//! The spectrum `σ(f)`, the counts `n_λ` and the order of reducibility
//! `ρ(f)`, with bound verdicts. Fractions in three or more variables are
//! handled through random plane slices.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::Error;
use crate::field::{Field, Rationals};
use crate::irrcount::{self, count_abs_irred, generic_count};
use crate::mpoly::MPoly;
use crate::numfield::split_run;
use crate::ratfunc::{ExtendedScalar, RationalFunction};
use crate::upoly::UniPoly;

/// Retry budget for drawing a non-degenerate slice.
pub const SLICE_ATTEMPTS: usize = 16;

/// One point of the spectrum, or a whole class of conjugate points.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    /// Defining polynomial of the class in `λ`; `None` for `∞`.
    pub defining_poly: Option<UniPoly<Rationals>>,
    pub n: usize,
}

impl SpectrumEntry {
    pub fn is_infinity(&self) -> bool {
        self.defining_poly.is_none()
    }

    /// Number of conjugate points the entry stands for.
    pub fn conjugacy(&self) -> usize {
        self.defining_poly
            .as_ref()
            .map_or(1, |p| p.degree().unwrap_or(0))
    }

    pub fn location(&self) -> String {
        match &self.defining_poly {
            Some(p) => p.to_string_var("λ"),
            None => "∞".into(),
        }
    }
}

impl Serialize for SpectrumEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumEntry", 4)?;
        st.serialize_field(
            "defining_poly",
            &self.defining_poly.as_ref().map(|p| p.to_string_var("λ")),
        )?;
        st.serialize_field("infinity", &self.is_infinity())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("conjugacy", &self.conjugacy())?;
        st.end()
    }
}

/// `ρ(f)`, infinite exactly for composite `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho {
    Finite(usize),
    Infinite,
}

impl Serialize for Rho {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rho::Finite(r) => s.serialize_u64(*r as u64),
            Rho::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(r) => write!(f, "{r}"),
            Rho::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Verdict {
    fn check(applies: bool, holds: bool) -> Self {
        match (applies, holds) {
            (false, _) => Verdict::NotApplicable,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

/// Verdicts for `ρ < deg` (polynomials), `ρ < deg² + deg` and `ρ < deg²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub stein: Verdict,
    pub theorem1: Verdict,
    pub lorenzini: Verdict,
}

impl Bounds {
    pub fn evaluate(rho: Rho, degree: usize, polynomial: bool) -> Self {
        match rho {
            Rho::Infinite => Bounds {
                stein: Verdict::NotApplicable,
                theorem1: Verdict::NotApplicable,
                lorenzini: Verdict::NotApplicable,
            },
            Rho::Finite(r) => Bounds {
                stein: Verdict::check(polynomial, r < degree),
                theorem1: Verdict::check(true, r < degree * degree + degree),
                lorenzini: Verdict::check(true, r < degree * degree),
            },
        }
    }

    pub fn any_failed(&self) -> bool {
        [self.stein, self.theorem1, self.lorenzini].contains(&Verdict::Fail)
    }
}

/// How far a report can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Confidence {
    /// Computed on the bivariate input itself.
    #[serde(rename = "exact")]
    Exact,
    /// Two independent slices agreed.
    #[serde(rename = "monte-carlo-verified")]
    MonteCarloVerified,
    /// Two of three slices agreed.
    #[serde(rename = "majority")]
    Majority,
    /// Three slices disagreed.
    #[serde(rename = "low-confidence")]
    LowConfidence,
}

/// Substitution `x_j <- a_j x + b_j y + c_j` used to slice a fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceRecord {
    pub seed: u64,
    pub attempts: usize,
    pub coefficients: Vec<[i64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub degree: usize,
    pub nvars: usize,
    pub composite: bool,
    pub entries: Vec<SpectrumEntry>,
    pub rho: Rho,
    pub bounds: Bounds,
    pub slices: Vec<SliceRecord>,
    pub seed: u64,
    pub confidence: Confidence,
}

impl SpectrumReport {
    /// `#σ(f)`, conjugates counted individually, `∞` included.
    pub fn spectrum_size(&self) -> usize {
        self.entries.iter().map(SpectrumEntry::conjugacy).sum()
    }

    /// Data compared between slices: composite flag, entries and `ρ`.
    fn key(&self) -> (bool, Vec<(String, usize)>, Rho) {
        let e = self.entries.iter().map(|e| (e.location(), e.n)).collect();
        (self.composite, e, self.rho)
    }
}

/// Spectrum of a nonconstant bivariate fraction.
pub fn spectrum(f: &RationalFunction, seed: u64) -> Result<SpectrumReport, Error> {
    if f.nvars() != 2 {
        return Err(Error::WrongNvars {
            expected: "2",
            got: f.nvars(),
        });
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let degree = f.degree();
    let gc = generic_count(f, seed)?;
    let mut report = SpectrumReport {
        degree,
        nvars: 2,
        composite: gc > 1,
        entries: vec![],
        rho: Rho::Infinite,
        bounds: Bounds::evaluate(Rho::Infinite, degree, f.is_polynomial()),
        slices: vec![],
        seed,
        confidence: Confidence::Exact,
    };
    if report.composite {
        return Ok(report);
    }
    let cs = irrcount::spectral_candidates(f, seed)?;
    let finite: Vec<Vec<(UniPoly<Rationals>, usize)>> = cs
        .finite_candidates
        .par_iter()
        .map(|h| fiber_counts(f, h))
        .collect::<Result<_, _>>()?;
    let mut entries: Vec<SpectrumEntry> = finite
        .into_iter()
        .flatten()
        .filter(|(_, n)| *n >= 2)
        .map(|(h, n)| SpectrumEntry {
            defining_poly: Some(h),
            n,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.conjugacy()
            .cmp(&b.conjugacy())
            .then_with(|| a.location().cmp(&b.location()))
    });
    if cs.include_infinity {
        let n = count_abs_irred(f.den())?;
        if n >= 2 {
            entries.push(SpectrumEntry {
                defining_poly: None,
                n,
            });
        }
    }
    let rho = entries.iter().map(|e| e.conjugacy() * (e.n - 1)).sum();
    report.rho = Rho::Finite(rho);
    report.bounds = Bounds::evaluate(report.rho, degree, f.is_polynomial());
    report.entries = entries;
    Ok(report)
}

/// `n_λ` at the roots of a squarefree `h`, one result per branch of
/// dynamic evaluation. Constant pencil members are left out.
pub fn fiber_counts(
    f: &RationalFunction,
    h: &UniPoly<Rationals>,
) -> Result<Vec<(UniPoly<Rationals>, usize)>, Error> {
    if h.degree() == Some(1) {
        let h = h.monic()?;
        let lambda: BigRational = -h.coeff(0);
        let member = f.member(&lambda);
        if member.is_constant() {
            return Ok(vec![]);
        }
        return Ok(vec![(h, count_abs_irred(&member)?)]);
    }
    let branches = split_run(h, |k| {
        let member = f.pencil_member(k, &ExtendedScalar::Finite(k.generator()));
        if member.is_constant() {
            return Ok(Ok(None));
        }
        match count_abs_irred(&member) {
            Ok(n) => Ok(Ok(Some(n))),
            Err(Error::Arith(e)) => Err(e),
            Err(e) => Ok(Err(e)),
        }
    })?;
    let mut out = Vec::new();
    for (k, r) in branches {
        if let Some(n) = r? {
            out.push((k.modulus().clone(), n));
        }
    }
    Ok(out)
}

/// `ρ(f)` for any number of variables.
pub fn rho(f: &RationalFunction, seed: u64) -> Result<Rho, Error> {
    Ok(analyze_spectrum(f, seed)?.rho)
}

/// [`spectrum`] for two variables, [`spectrum_multivar`] otherwise.
pub fn analyze_spectrum(f: &RationalFunction, seed: u64) -> Result<SpectrumReport, Error> {
    match f.nvars() {
        2 => spectrum(f, seed),
        n if n >= 3 => spectrum_multivar(f, seed),
        n => Err(Error::WrongNvars {
            expected: ">= 2",
            got: n,
        }),
    }
}

/// Applies `x_j <- a_j x + b_j y + c_j`.
pub fn slice_with(
    f: &RationalFunction,
    coefficients: &[[i64; 3]],
) -> Result<RationalFunction, Error> {
    if coefficients.len() != f.nvars() {
        return Err(Error::NvarsMismatch(coefficients.len(), f.nvars()));
    }
    let x = MPoly::var(Rationals, 2, 0);
    let y = MPoly::var(Rationals, 2, 1);
    let images: Vec<_> = coefficients
        .iter()
        .map(|&[a, b, c]| {
            x.scale(&Rationals.from_int(a))
                .add(&y.scale(&Rationals.from_int(b)))
                .add(&MPoly::constant(Rationals, 2, Rationals.from_int(c)))
        })
        .collect();
    f.substitute(&images)
}

/// Slices with draws from `draw` until the degree survives.
pub fn slice_from_draws(
    f: &RationalFunction,
    seed: u64,
    attempts: usize,
    mut draw: impl FnMut() -> Vec<[i64; 3]>,
) -> Result<(RationalFunction, SliceRecord), Error> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    for attempt in 1..=attempts {
        let coefficients = draw();
        let s = slice_with(f, &coefficients)?;
        if s.degree() == f.degree() {
            return Ok((
                s,
                SliceRecord {
                    seed,
                    attempts: attempt,
                    coefficients,
                },
            ));
        }
    }
    Err(Error::SliceDegenerate(attempts))
}

/// Random plane slice with integer coefficients in `[-9, 9]` drawn from
/// `seed`.
pub fn slice_to_bivariate(
    f: &RationalFunction,
    seed: u64,
) -> Result<(RationalFunction, SliceRecord), Error> {
    if f.nvars() < 3 {
        return Err(Error::WrongNvars {
            expected: ">= 3",
            got: f.nvars(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.nvars();
    slice_from_draws(f, seed, SLICE_ATTEMPTS, || {
        (0..n)
            .map(|_| {
                [
                    rng.gen_range(-9..=9),
                    rng.gen_range(-9..=9),
                    rng.gen_range(-9..=9),
                ]
            })
            .collect()
    })
}

fn sliced_report(f: &RationalFunction, seed: u64) -> Result<(SpectrumReport, SliceRecord), Error> {
    let (s, record) = slice_to_bivariate(f, seed)?;
    Ok((spectrum(&s, seed)?, record))
}

/// Spectrum of a fraction in three or more variables from independent
/// plane slices (seeds `seed`, `seed + 1`, and `seed + 2` on disagreement).
/// When the first two slices disagree the result is the intersection of all
/// three, tagged `Majority` if the third slice did not change the
/// intersection of the first two and `LowConfidence` otherwise.
pub fn spectrum_multivar(f: &RationalFunction, seed: u64) -> Result<SpectrumReport, Error> {
    if f.nvars() < 3 {
        return Err(Error::WrongNvars {
            expected: ">= 3",
            got: f.nvars(),
        });
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let seeds = [seed, seed.wrapping_add(1)];
    let pair: Vec<_> = seeds
        .par_iter()
        .map(|&s| sliced_report(f, s))
        .collect::<Result<_, _>>()?;
    let (r1, s1) = pair[0].clone();
    let (r2, s2) = pair[1].clone();
    let (chosen, slices, confidence) = if r1.key() == r2.key() {
        (r1, vec![s1, s2], Confidence::MonteCarloVerified)
    } else {
        // every slice spectrum contains σ(f) with counts at least n_λ, so
        // spurious values from one plane are dropped by intersecting
        let first = intersect(&[r1.clone(), r2.clone()]);
        let (r3, s3) = sliced_report(f, seed.wrapping_add(2))?;
        let all = intersect(&[r1, r2, r3]);
        let confidence = if all.key() == first.key() {
            Confidence::Majority
        } else {
            Confidence::LowConfidence
        };
        (all, vec![s1, s2, s3], confidence)
    };
    Ok(SpectrumReport {
        degree: f.degree(),
        nvars: f.nvars(),
        bounds: Bounds::evaluate(chosen.rho, f.degree(), f.is_polynomial()),
        slices,
        seed,
        confidence,
        ..chosen
    })
}

/// Common part of several slice reports: composite only if every slice is,
/// otherwise the points present in every non-composite slice with their
/// least count.
fn intersect(reports: &[SpectrumReport]) -> SpectrumReport {
    let live: Vec<&SpectrumReport> = reports.iter().filter(|r| !r.composite).collect();
    let Some((first, rest)) = live.split_first() else {
        return reports[0].clone();
    };
    let mut finite: Vec<(UniPoly<Rationals>, usize)> = first
        .entries
        .iter()
        .filter_map(|e| e.defining_poly.clone().map(|h| (h, e.n)))
        .collect();
    let mut infinity = first.entries.iter().find(|e| e.is_infinity()).map(|e| e.n);
    for r in rest {
        let mut next = Vec::new();
        for (h, n) in &finite {
            for e in &r.entries {
                let Some(h2) = &e.defining_poly else { continue };
                let g = h.gcd(h2).expect("gcd over Q");
                if g.degree().is_some_and(|d| d >= 1) {
                    next.push((g.monic().expect("nonzero"), (*n).min(e.n)));
                }
            }
        }
        finite = next;
        let inf2 = r.entries.iter().find(|e| e.is_infinity()).map(|e| e.n);
        infinity = infinity.zip(inf2).map(|(a, b)| a.min(b));
    }
    let mut entries: Vec<SpectrumEntry> = finite
        .into_iter()
        .map(|(h, n)| SpectrumEntry {
            defining_poly: Some(h),
            n,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.conjugacy()
            .cmp(&b.conjugacy())
            .then_with(|| a.location().cmp(&b.location()))
    });
    entries.extend(infinity.map(|n| SpectrumEntry {
        defining_poly: None,
        n,
    }));
    let rho = entries.iter().map(|e| e.conjugacy() * (e.n - 1)).sum();
    SpectrumReport {
        entries,
        rho: Rho::Finite(rho),
        ..(*first).clone()
    }
}

/// Compositeness of a fraction in any number of variables; three or more
/// variables go through the same slices as [`spectrum_multivar`].
pub fn composite_generic_count(f: &RationalFunction, seed: u64) -> Result<usize, Error> {
    if f.nvars() == 2 {
        return generic_count(f, seed);
    }
    // slices of a composite fraction stay composite, so a single
    // non-composite slice settles the question
    let mut best = usize::MAX;
    for i in 0..2u64 {
        let (s, _) = slice_to_bivariate(f, seed.wrapping_add(i))?;
        best = best.min(generic_count(&s, seed)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::mpoly::QPoly;

    fn v(n: usize, i: usize) -> QPoly {
        MPoly::var(Rationals, n, i)
    }
    fn c(n: usize, k: i64) -> QPoly {
        MPoly::constant(Rationals, n, rat(k))
    }
    fn rf(p: QPoly, q: QPoly) -> RationalFunction {
        RationalFunction::new(p, q).unwrap()
    }
    fn lorenzini(n: usize) -> RationalFunction {
        let (x, y) = (v(n, 0), v(n, 1));
        let s = c(n, 1).add(&x).add(&y);
        rf(x.pow(3).add(&y.pow(3)).add(&s.pow(3)), x.mul(&y).mul(&s))
    }

    #[test]
    fn spectrum_of_x_over_y() {
        let r = spectrum(&rf(v(2, 0), v(2, 1)), 0).unwrap();
        assert!(r.entries.is_empty());
        assert_eq!(r.rho, Rho::Finite(0));
        assert_eq!(r.bounds.theorem1, Verdict::Pass);
        assert_eq!(r.bounds.lorenzini, Verdict::Pass);
        assert_eq!(r.bounds.stein, Verdict::NotApplicable);
    }

    #[test]
    fn spectrum_of_xy() {
        let r = spectrum(&rf(v(2, 0).mul(&v(2, 1)), c(2, 1)), 0).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].location(), "λ");
        assert_eq!(r.entries[0].n, 2);
        assert_eq!(r.rho, Rho::Finite(1));
        assert_eq!(r.bounds.stein, Verdict::Pass);
    }

    #[test]
    fn spectrum_of_lorenzini() {
        let r = spectrum(&lorenzini(2), 0).unwrap();
        assert!(!r.composite);
        let got: Vec<(String, usize, usize)> = r
            .entries
            .iter()
            .map(|e| (e.location(), e.n, e.conjugacy()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("λ-3".into(), 3, 1),
                ("λ^2+3*λ+9".into(), 3, 2),
                ("∞".into(), 3, 1)
            ]
        );
        assert_eq!(r.rho, Rho::Finite(8));
        assert_eq!(r.spectrum_size(), 4);
        assert_eq!(r.bounds.lorenzini, Verdict::Pass);
        assert_eq!(r.bounds.theorem1, Verdict::Pass);
    }

    #[test]
    fn conjugates_share_counts_across_forced_splits() {
        // λ^3 - 27 mixes the rational point 3 with the conjugate pair
        let f = lorenzini(2);
        let counts = fiber_counts(&f, &UniPoly::from_ints(&[-27, 0, 0, 1])).unwrap();
        assert!(counts.iter().all(|(_, n)| *n == 3), "{counts:?}");
        // mixing a spectrum point with a generic one forces a split
        let counts = fiber_counts(
            &f,
            &UniPoly::from_ints(&[9, 3, 1]).mul(&UniPoly::from_ints(&[2, 0, 1])),
        )
        .unwrap();
        let mut got: Vec<(String, usize)> =
            counts.iter().map(|(h, n)| (h.to_string(), *n)).collect();
        got.sort();
        assert_eq!(got, vec![("t^2+2".into(), 1), ("t^2+3*t+9".into(), 3)]);
    }

    #[test]
    fn composite_reports_infinite_rho() {
        let r = spectrum(&rf(v(2, 0).pow(2), v(2, 1).pow(2)), 0).unwrap();
        assert!(r.composite);
        assert_eq!(r.rho, Rho::Infinite);
        assert_eq!(rho(&rf(v(2, 0), v(2, 1)), 0).unwrap(), Rho::Finite(0));
    }

    #[test]
    fn json_shape() {
        let r = spectrum(&rf(v(2, 0).mul(&v(2, 1)), c(2, 1)), 5).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["rho"], 1);
        assert_eq!(j["entries"][0]["defining_poly"], "λ");
        assert_eq!(j["entries"][0]["conjugacy"], 1);
        assert_eq!(j["bounds"]["stein"], "pass");
        assert_eq!(j["seed"], 5);
        let r = spectrum(&rf(v(2, 0).pow(2), v(2, 1).pow(2)), 0).unwrap();
        assert_eq!(serde_json::to_value(&r).unwrap()["rho"], "infinite");
    }

    #[test]
    fn quadric_fibers_drop_spurious_slice_points() {
        // every plane is tangent to some member of x*y + z, where the
        // section splits into two lines
        let f = rf(v(3, 0).mul(&v(3, 1)).add(&v(3, 2)), c(3, 1));
        for seed in [1, 2, 3] {
            let r = spectrum_multivar(&f, seed).unwrap();
            assert_eq!(r.rho, Rho::Finite(0), "seed {seed}");
            assert!(r.entries.is_empty());
        }
    }

    #[test]
    fn slicing() {
        let f = rf(v(3, 0), v(3, 1).add(&v(3, 2)));
        let s = slice_with(&f, &[[1, 0, 0], [0, 1, 0], [1, 0, 0]]).unwrap();
        assert_eq!(s, rf(v(2, 0), v(2, 1).add(&v(2, 0))));
        let g = rf(
            v(3, 0).pow(2).add(&v(3, 1).pow(2)).add(&v(3, 2).pow(2)),
            v(3, 0).mul(&v(3, 1)).mul(&v(3, 2)),
        );
        let (s, rec) = slice_to_bivariate(&g, 11).unwrap();
        assert_eq!(s.degree(), 3);
        assert_eq!(rec.coefficients.len(), 3);
        assert_eq!(
            slice_from_draws(&g, 0, 4, || vec![[0, 0, 1]; 3]),
            Err(Error::SliceDegenerate(4))
        );
    }

    #[test]
    fn lorenzini_embedded_in_three_variables() {
        let r = spectrum_multivar(&lorenzini(3), 1).unwrap();
        assert_eq!(r.rho, Rho::Finite(8));
        assert_eq!(r.nvars, 3);
        assert_eq!(r.confidence, Confidence::MonteCarloVerified);
        assert_eq!(r.slices.len(), 2);
    }
}
