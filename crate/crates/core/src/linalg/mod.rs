//! Exact linear algebra.
//!
//! * [`field_rank`] / [`field_kernel`]: Gaussian elimination over any
//!   [`Field`]; over a number field a non-invertible pivot raises the
//!   zero divisor for dynamic evaluation.
//! * [`rational_kernel`]: kernel over `Q` computed modulo word-size primes,
//!   lifted by rational reconstruction and then verified exactly.
//! * [`bareiss`]: fraction-free determinants over `Z`.

pub mod bareiss;
pub mod modular;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{ArithError, Field, Rationals};

/// Row-echelon reduction in place; returns the pivot columns.
fn echelon<F: Field>(
    field: &F,
    rows: &mut [Vec<F::Elem>],
    ncols: usize,
) -> Result<Vec<usize>, ArithError> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c])?;
        for x in rows[r].iter_mut().skip(c) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !field.is_zero(&pivot_row[j]) {
                    row[j] = field.sub(&row[j], &field.mul(&f, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn field_rank<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    ncols: usize,
) -> Result<usize, ArithError> {
    let mut m = rows.to_vec();
    Ok(echelon(field, &mut m, ncols)?.len())
}

/// Basis of the right kernel, one vector per non-pivot column.
pub fn field_kernel<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    ncols: usize,
) -> Result<Vec<Vec<F::Elem>>, ArithError> {
    let mut m = rows.to_vec();
    let pivots = echelon(field, &mut m, ncols)?;
    let mut basis = Vec::new();
    for j in (0..ncols).filter(|j| !pivots.contains(j)) {
        let mut v = vec![field.zero(); ncols];
        v[j] = field.one();
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(&m[k][j]);
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Determinant by elimination over `field`.
pub fn field_determinant<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
) -> Result<F::Elem, ArithError> {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !field.is_zero(&m[i][c])) else {
            return Ok(field.zero());
        };
        if p != c {
            m.swap(p, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[c][c]);
        let inv = field.inv(&m[c][c])?;
        for i in c + 1..n {
            if field.is_zero(&m[i][c]) {
                continue;
            }
            let f = field.mul(&m[i][c], &inv);
            let (top, bottom) = m.split_at_mut(i);
            for (dst, src) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                *dst = field.sub(dst, &field.mul(&f, src));
            }
        }
    }
    Ok(det)
}

/// Sylvester matrix of `a` and `b` (coefficients lowest degree first) taken
/// with formal degrees `da` and `db`.
pub fn sylvester<F: Field>(
    field: &F,
    a: &[F::Elem],
    da: usize,
    b: &[F::Elem],
    db: usize,
) -> Vec<Vec<F::Elem>> {
    let n = da + db;
    let coeff = |p: &[F::Elem], k: usize| p.get(k).cloned().unwrap_or_else(|| field.zero());
    let mut rows = Vec::with_capacity(n);
    for i in 0..db {
        let mut row = vec![field.zero(); n];
        for k in 0..=da {
            row[i + k] = coeff(a, da - k);
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![field.zero(); n];
        for k in 0..=db {
            row[i + k] = coeff(b, db - k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant with formal degrees; zero when both formal leading
/// coefficients vanish.
pub fn resultant<F: Field>(
    field: &F,
    a: &[F::Elem],
    da: usize,
    b: &[F::Elem],
    db: usize,
) -> Result<F::Elem, ArithError> {
    if da + db == 0 {
        return Ok(field.one());
    }
    field_determinant(field, &sylvester(field, a, da, b, db))
}

/// Scales a rational row to a primitive integer row.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for x in row {
        den = den.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = out.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x /= &g;
        }
    }
    out
}

/// Kernel of a rational matrix.
///
/// The reduced row-echelon form is computed modulo a sequence of primes and
/// lifted by rational reconstruction. A lifted basis is accepted only after
/// `A v = 0` is checked exactly; since the rank modulo a prime never exceeds
/// the rank over `Q`, an accepted basis has the true kernel dimension. Falls
/// back to elimination over `Q` if lifting does not converge.
pub fn rational_kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| integer_row(r))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    if let Some(k) = modular::lifted_kernel(&int_rows, ncols) {
        return k;
    }
    field_kernel(&Rationals, rows, ncols).expect("Q is a field")
}

pub fn rational_nullity(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    rational_kernel(rows, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = rational_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(field_rank(&Rationals, &a, 3).unwrap(), 2);
    }

    #[test]
    fn modular_and_field_kernels_agree() {
        let a = vec![
            vec![ratio(1, 2), rat(3), rat(-7), rat(0)],
            vec![rat(2), ratio(-5, 3), rat(1), rat(4)],
            vec![ratio(5, 2), ratio(4, 3), rat(-6), rat(4)],
        ];
        let k1 = rational_kernel(&a, 4);
        let k2 = field_kernel(&Rationals, &a, 4).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(t^2 - 1, t - 3) = (3 - 1)(3 + 1) up to sign convention a(roots of b)
        let a = [rat(-1), rat(0), rat(1)];
        let b = [rat(-3), rat(1)];
        assert_eq!(resultant(&Rationals, &a, 2, &b, 1).unwrap(), rat(8));
        // common root gives zero
        let c = [rat(-1), rat(1)];
        assert!(resultant(&Rationals, &a, 2, &c, 1).unwrap().is_zero());
        let d = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(field_determinant(&Rationals, &d).unwrap(), rat(18));
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(rational_kernel(&a, 2).is_empty());
    }
}
