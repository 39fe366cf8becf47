//! Fraction-free elimination over `Z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Determinant of a square integer matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&m(&[&[2, 3], &[1, 4]])), BigInt::from(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            determinant(&m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])),
            BigInt::from(-1)
        );
    }
}
