//! Linear algebra modulo word-size primes.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_COUNT: usize = 64;

/// The largest primes below `2^62`, in decreasing order.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut n = (1u64 << 62) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub fn reduce_rational(x: &BigRational, p: u64) -> Option<u64> {
    let d = reduce(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(reduce(x.numer(), p), inv_mod(d, p), p))
}

/// Reduced row-echelon form modulo `p`; returns the pivot columns.
pub fn rref(m: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(k) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut().skip(c) {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..ncols {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m = m.to_vec();
    rref(&mut m, ncols, p).len()
}

/// `a/b` with `a = b*r (mod m)` and `|a|, b <= sqrt(m/2)`, if it exists.
pub fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, rem) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, rem);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Kernel of an integer matrix by multi-modular RREF and rational
/// reconstruction, accepted only after exact verification.
pub fn lifted_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Option<Vec<Vec<BigRational>>> {
    if rows.is_empty() {
        return Some(
            (0..ncols)
                .map(|j| {
                    (0..ncols)
                        .map(|i| {
                            if i == j {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let mut reference: Option<Vec<usize>> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigRational>> = None;
    for &p in primes() {
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| reduce(x, p)).collect())
            .collect();
        let piv = rref(&mut m, ncols, p);
        match &reference {
            Some(r) if piv.len() < r.len() || (piv.len() == r.len() && piv != *r) => continue,
            Some(r) if piv.len() == r.len() => {}
            _ => {
                reference = Some(piv.clone());
                residues.clear();
                modulus = BigInt::one();
                last = None;
            }
        }
        let free: Vec<usize> = (0..ncols).filter(|j| !piv.contains(j)).collect();
        if free.is_empty() {
            return Some(vec![]);
        }
        let vals: Vec<u64> = (0..piv.len())
            .flat_map(|k| free.iter().map(move |&j| (k, j)))
            .map(|(k, j)| m[k][j])
            .collect();
        let pb = BigInt::from(p);
        if residues.is_empty() {
            residues = vals.iter().map(|&v| BigInt::from(v)).collect();
        } else {
            // x = a (mod M), x = v (mod p)  =>  x = a + M * ((v - a) M^-1 mod p)
            let minv = inv_mod(reduce(&modulus, p), p);
            for (a, &v) in residues.iter_mut().zip(&vals) {
                let diff = (v + p - reduce(a, p)) % p;
                let k = mul_mod(diff, minv, p);
                *a += &modulus * BigInt::from(k);
            }
        }
        modulus *= &pb;
        let lifted: Option<Vec<BigRational>> = residues
            .iter()
            .map(|a| rational_reconstruction(a, &modulus))
            .collect();
        let Some(lifted) = lifted else { continue };
        if last.as_ref() != Some(&lifted) {
            // wait for one more prime to confirm before the exact check
            last = Some(lifted);
            continue;
        }
        let piv = reference.as_ref().unwrap();
        let basis: Vec<Vec<BigRational>> = free
            .iter()
            .enumerate()
            .map(|(fi, &j)| {
                let mut v = vec![BigRational::zero(); ncols];
                v[j] = BigRational::one();
                for (k, &c) in piv.iter().enumerate() {
                    v[c] = -lifted[k * free.len() + fi].clone();
                }
                v
            })
            .collect();
        if basis.iter().all(|v| annihilates(rows, v)) {
            return Some(basis);
        }
    }
    None
}

fn annihilates(rows: &[Vec<BigInt>], v: &[BigRational]) -> bool {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let iv: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    rows.iter().all(|r| {
        let mut acc = BigInt::zero();
        for (a, b) in r.iter().zip(&iv) {
            if a.sign() != Sign::NoSign && b.sign() != Sign::NoSign {
                acc += a * b;
            }
        }
        acc.is_zero()
    })
}
