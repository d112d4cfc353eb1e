use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::isqrt;

/// A unit `(x + y*sqrt(m)) / denom` of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub x: BigInt,
    pub y: BigInt,
    pub denom: u8,
    pub norm: i8,
}

impl FundamentalUnit {
    /// Whether the unit already lies in `Z[sqrt(m)]`.
    pub fn in_z_sqrt_m(&self) -> bool {
        self.denom == 1
    }

    /// The trace `2x / denom`.
    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.x / BigInt::from(self.denom)
    }

    /// `(x, y, denom)` of the `k`-th power, with `denom` reduced to 1 when possible.
    pub fn pow(&self, m: i64, k: u32) -> (BigInt, BigInt, u8) {
        let m = BigInt::from(m);
        let mut x = BigInt::one();
        let mut y = BigInt::zero();
        let mut scale = 1u64;
        for _ in 0..k {
            let nx = &x * &self.x + &m * &y * &self.y;
            let ny = &x * &self.y + &y * &self.x;
            x = nx;
            y = ny;
            scale *= self.denom as u64;
            while scale > 1 && x.is_even() && y.is_even() {
                x /= 2;
                y /= 2;
                scale /= 2;
            }
        }
        assert!(scale <= 2);
        (x, y, scale as u8)
    }
}

/// Fundamental unit `> 1` of the real quadratic field with squarefree radicand `m`,
/// read off the continued fraction of the generator of the maximal order.
pub fn fundamental_unit(m: i64) -> FundamentalUnit {
    assert!(m > 1);
    let mm = m as i128;
    let s = isqrt(mm);
    let one_mod_four = m % 4 == 1;
    let (mut p_k, mut q_k): (i128, i128) = if one_mod_four { (1, 2) } else { (0, 1) };
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let bm = BigInt::from(m);
    loop {
        let a = Integer::div_floor(&(p_k + s), &q_k);
        let h = BigInt::from(a) * &h1 + &h2;
        let k = BigInt::from(a) * &k1 + &k2;
        let (x, y, denom) = if one_mod_four {
            (BigInt::from(2) * &h - &k, k.clone(), 2u8)
        } else {
            (h.clone(), k.clone(), 1u8)
        };
        let n = &x * &x - &bm * &y * &y;
        let den2 = BigInt::from(denom as u32 * denom as u32);
        if n.abs() == den2 {
            let norm = if n.is_positive() { 1 } else { -1 };
            return if denom == 2 && x.is_even() && y.is_even() {
                FundamentalUnit { x: x / 2, y: y / 2, denom: 1, norm }
            } else {
                FundamentalUnit { x, y, denom, norm }
            };
        }
        h2 = core::mem::replace(&mut h1, h);
        k2 = core::mem::replace(&mut k1, k);
        p_k = a * q_k - p_k;
        q_k = (mm - p_k * p_k) / q_k;
    }
}
