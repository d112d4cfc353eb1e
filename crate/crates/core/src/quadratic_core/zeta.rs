//! Special value `zeta_F(-1)` of a real quadratic field.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::kronecker::kronecker;
use crate::arith::sigma1;
use crate::Q;

/// Smallest-prime-factor table, reusable across many discriminants.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn up_to(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let k = i * p as usize;
                if p > spf[i] || k > n {
                    break;
                }
                spf[k] = p;
            }
        }
        FactorSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// `sum_{a=1}^{D} chi_D(a) a^2` for the quadratic character of discriminant `disc`.
    pub fn second_moment(&self, disc: u64) -> i128 {
        let n = disc as usize;
        assert!(n <= self.limit());
        let mut chi = vec![0i8; n + 1];
        if n >= 1 {
            chi[1] = 1;
        }
        let mut total: i128 = if n >= 1 { 1 } else { 0 };
        for a in 2..=n {
            let p = self.spf[a] as usize;
            chi[a] = if p == a {
                kronecker(disc as i64, a as i64)
            } else {
                chi[p] * chi[a / p]
            };
            if chi[a] != 0 {
                let a2 = (a as i128) * (a as i128);
                total += if chi[a] > 0 { a2 } else { -a2 };
            }
        }
        total
    }

    /// `zeta_F(-1) = B_{2,chi} / 24` for the real quadratic field of discriminant `disc`.
    pub fn zeta_minus1_disc(&self, disc: u64) -> Q {
        let s = self.second_moment(disc);
        BigRational::new(BigInt::from(s), BigInt::from(24) * BigInt::from(disc))
    }
}

/// Divisor-sum table for the Siegel evaluation.
#[derive(Debug, Clone)]
pub struct DivisorSums {
    sigma: Vec<u64>,
}

impl DivisorSums {
    pub fn up_to(n: usize) -> Self {
        let mut sigma = vec![0u64; n + 1];
        for d in 1..=n {
            let mut k = d;
            while k <= n {
                sigma[k] += d as u64;
                k += d;
            }
        }
        DivisorSums { sigma }
    }

    pub fn get(&self, n: u64) -> u64 {
        self.sigma
            .get(n as usize)
            .copied()
            .unwrap_or_else(|| sigma1(n))
    }
}

/// `sum sigma_1((D - b^2) / 4)` over `b^2 < D`, `b = D mod 2`.
pub fn siegel_sum(disc: u64, sums: Option<&DivisorSums>) -> u64 {
    let mut total = 0u64;
    let mut b = disc % 2;
    while b * b < disc {
        let n = (disc - b * b) / 4;
        let s = sums.map_or_else(|| sigma1(n), |t| t.get(n));
        total += if b == 0 { s } else { 2 * s };
        b += 2;
    }
    total
}

/// `zeta_F(-1)` from the divisor-sum formula `(1/60) sum_b sigma_1((D - b^2)/4)`.
pub fn siegel_zeta_minus1(disc: u64, sums: Option<&DivisorSums>) -> Q {
    BigRational::new(BigInt::from(siegel_sum(disc, sums)), BigInt::from(60))
}
