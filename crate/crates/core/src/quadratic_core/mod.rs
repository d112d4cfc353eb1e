//! Class numbers, fundamental units and `zeta_F(-1)` for quadratic fields.

pub mod forms;
pub mod kronecker;
pub mod unit;
pub mod zeta;

use num_bigint::BigInt;

pub use forms::{Form, Indefinite, Transform};
pub use kronecker::kronecker;
pub use unit::{fundamental_unit, FundamentalUnit};
pub use zeta::{siegel_zeta_minus1, DivisorSums, FactorSieve};

use crate::arith::{field_disc, is_squarefree};
use crate::error::{Error, Result};
use crate::Q;

/// A quadratic field `Q(sqrt(m))` together with its fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disc {
    m: i64,
    disc: i64,
}

impl Disc {
    pub fn new(m: i64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::NotAField(m));
        }
        if !is_squarefree(m) {
            return Err(Error::NotSquarefree(m));
        }
        Ok(Disc { m, disc: field_disc(m) })
    }

    /// The radicand `m`.
    pub fn m(&self) -> i64 {
        self.m
    }

    /// The fundamental discriminant.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.m > 0
    }
}

/// Class number of `Q(sqrt(m))` for squarefree `m < 0`.
pub fn class_number_imag(m: i64) -> Result<u64> {
    let d = Disc::new(m)?;
    if d.is_real() {
        return Err(Error::OutOfDomain { what: "imaginary radicand", value: m });
    }
    Ok(forms::definite_class_count(d.disc()))
}

/// `(h, h_plus)` for the real quadratic field `Q(sqrt(m))`.
pub fn class_number_real(m: i64) -> Result<(u64, u64)> {
    let d = Disc::new(m)?;
    if !d.is_real() {
        return Err(Error::OutOfDomain { what: "real radicand", value: m });
    }
    let h_plus = Indefinite::new(d.disc() as i128).cycle_count();
    let norm = fundamental_unit(m).norm;
    Ok(if norm < 0 { (h_plus, h_plus) } else { (h_plus / 2, h_plus) })
}

/// `zeta_F(-1)` for the real quadratic field `Q(sqrt(m))`.
pub fn zeta_minus1(m: i64) -> Result<Q> {
    let d = Disc::new(m)?;
    if !d.is_real() {
        return Err(Error::OutOfDomain { what: "real radicand", value: m });
    }
    let disc = d.disc() as u64;
    Ok(FactorSieve::up_to(disc as usize).zeta_minus1_disc(disc))
}

/// Invariants of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInvariants {
    pub disc: Disc,
    pub h: u64,
    pub h_plus: Option<u64>,
    pub fund_unit: Option<FundamentalUnit>,
    pub zeta_minus1: Option<Q>,
}

impl ClassInvariants {
    pub fn compute(m: i64) -> Result<Self> {
        let disc = Disc::new(m)?;
        if disc.is_real() {
            let (h, h_plus) = class_number_real(m)?;
            Ok(ClassInvariants {
                disc,
                h,
                h_plus: Some(h_plus),
                fund_unit: Some(fundamental_unit(m)),
                zeta_minus1: Some(zeta_minus1(m)?),
            })
        } else {
            Ok(ClassInvariants {
                disc,
                h: class_number_imag(m)?,
                h_plus: None,
                fund_unit: None,
                zeta_minus1: None,
            })
        }
    }
}

/// Source of the quadratic invariants consumed by the order and type-number formulas.
/// The plain implementation recomputes; callers may substitute a memoized one.
pub trait QuadraticData {
    /// Class number of `Q(sqrt(m))`.
    fn class_number(&self, m: i64) -> Result<u64>;
    /// Fundamental unit of `Q(sqrt(m))`, `m > 1`.
    fn fundamental_unit(&self, m: i64) -> Result<FundamentalUnit>;
    /// `zeta_F(-1)` of `Q(sqrt(m))`, `m > 1`.
    fn zeta_minus1(&self, m: i64) -> Result<Q>;
}

/// Direct computation without memoization.
#[derive(Debug, Clone, Copy, Default)]
pub struct Direct;

impl QuadraticData for Direct {
    fn class_number(&self, m: i64) -> Result<u64> {
        if m > 0 {
            class_number_real(m).map(|(h, _)| h)
        } else {
            class_number_imag(m)
        }
    }

    fn fundamental_unit(&self, m: i64) -> Result<FundamentalUnit> {
        let d = Disc::new(m)?;
        if !d.is_real() {
            return Err(Error::OutOfDomain { what: "real radicand", value: m });
        }
        Ok(fundamental_unit(m))
    }

    fn zeta_minus1(&self, m: i64) -> Result<Q> {
        zeta_minus1(m)
    }
}

/// The order `A = Z[sqrt(d)]` of conductor 2 in `Q(sqrt(d))`, `d = 1 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderData {
    pub disc: Disc,
    /// `[O_F^x : A^x]`, either 1 or 3.
    pub varpi: u8,
    pub h_a: u64,
}

impl OrderData {
    pub fn compute<S: QuadraticData + ?Sized>(d: i64, data: &S) -> Result<Self> {
        let disc = Disc::new(d)?;
        if d < 5 || d % 4 != 1 {
            return Err(Error::OutOfDomain { what: "radicand 1 mod 4", value: d });
        }
        let unit = data.fundamental_unit(d)?;
        let varpi = if unit.in_z_sqrt_m() { 1 } else { 3 };
        let h_f = data.class_number(d)?;
        let chi2 = kronecker(d, 2) as i64;
        let h_a = h_f as i64 * (2 - chi2) / varpi as i64;
        Ok(OrderData { disc, varpi, h_a: h_a as u64 })
    }
}

/// `x^2 - m y^2` over `denom^2`, as an integer.
pub fn unit_norm_check(u: &FundamentalUnit, m: i64) -> BigInt {
    (&u.x * &u.x - BigInt::from(m) * &u.y * &u.y) / BigInt::from(u.denom as u32 * u.denom as u32)
}
