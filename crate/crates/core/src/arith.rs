//! Small integer utilities shared by the field and order code.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of a negative number");
    (n as u128).sqrt() as i128
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut k = 17u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Prime factorization of `n > 0` by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factorize(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// The squarefree kernel of `n` with its sign kept: `n = s * k^2`.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0);
    let core: i64 = factorize(n.unsigned_abs())
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p as i64)
        .product();
    n.signum() * core
}

/// Squarefree kernel of a nonzero rational, as a signed integer.
pub fn squarefree_part_q(r: &Q) -> BigInt {
    let n = r.numer() * r.denom();
    squarefree_part_big(&n)
}

pub fn squarefree_part_big(n: &BigInt) -> BigInt {
    assert!(!n.is_zero());
    let mut rest = n.abs();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            core *= &p;
        }
        p += 1u32;
    }
    core *= rest;
    if n.is_negative() {
        -core
    } else {
        core
    }
}

/// 2-adic valuation of a nonzero integer.
pub fn v2(n: i64) -> u32 {
    assert!(n != 0);
    n.trailing_zeros()
}

/// Discriminant of the quadratic field generated by the square root of the squarefree `m`.
pub fn field_disc(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

pub fn sigma1(n: u64) -> u64 {
    factorize(n)
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = alloc::vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn q_int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Converts an integral rational to `u64`, or `None` when it is not a nonnegative integer.
pub fn q_to_u64(r: &Q) -> Option<u64> {
    if r.is_integer() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

/// Extended gcd over big integers: returns `(g, u, v)` with `u*a + v*b = g >= 0`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
