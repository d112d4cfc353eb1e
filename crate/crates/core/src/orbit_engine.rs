//! Orbit counting for a finite Picard group acting on ideal classes.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{q_int, q_to_u64};
use crate::error::{Error, Result};
use crate::Q;

/// One CM order fixed by a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contribution {
    pub delta: u8,
    pub h_b: u64,
    /// Product of the local optimal embedding numbers.
    pub m_prod: u64,
}

/// Data for the orbit-number formula: one contribution list per nontrivial group element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbitInput {
    pub h_o: u64,
    pub h_a: u64,
    pub classes: Vec<Vec<Contribution>>,
}

fn integral(value: Q, what: &'static str) -> Result<u64> {
    q_to_u64(&value).ok_or(Error::NonIntegral { what, value })
}

/// Burnside: the average number of fixed points, identity first.
pub fn burnside(fixed_counts: &[u64]) -> Result<u64> {
    if fixed_counts.is_empty() {
        return Err(Error::OutOfDomain { what: "group order", value: 0 });
    }
    let total: u64 = fixed_counts.iter().sum();
    let r = BigRational::new(BigInt::from(total), BigInt::from(fixed_counts.len()));
    let r = integral(r, "orbit count")?;
    if r == 0 {
        return Err(Error::OutOfDomain { what: "orbit count", value: 0 });
    }
    Ok(r)
}

/// Fixed points of one group element: `sum (2 - delta)/2 * h(B) * m(B)`.
pub fn fixed_point_count(entries: &[Contribution]) -> Result<u64> {
    let mut total = q_int(0);
    for c in entries {
        if c.delta > 1 {
            return Err(Error::OutOfDomain { what: "delta", value: c.delta as i64 });
        }
        total += BigRational::new(BigInt::from((2 - c.delta as u64) * c.h_b * c.m_prod), BigInt::from(2));
    }
    integral(total, "fixed-point count")
}

/// `r = (h_O + sum of fixed-point counts) / h_A`.
pub fn orbit_number(input: &OrbitInput) -> Result<u64> {
    if input.h_a == 0 || input.h_o == 0 {
        return Err(Error::OutOfDomain { what: "class number", value: 0 });
    }
    let mut total = input.h_o;
    for class in &input.classes {
        total += fixed_point_count(class)?;
    }
    let r = integral(BigRational::new(BigInt::from(total), BigInt::from(input.h_a)), "orbit number")?;
    if r == 0 {
        return Err(Error::OutOfDomain { what: "orbit number", value: 0 });
    }
    Ok(r)
}

/// Outcome of the two divisibility predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub square_part_divides: bool,
    /// `None` when the free-action criterion does not apply.
    pub free_action_divides: Option<bool>,
}

impl DivisibilityReport {
    pub fn passed(&self) -> bool {
        self.square_part_divides && self.free_action_divides.unwrap_or(true)
    }
}

pub fn divisibility_checks(h_o: u64, pic_tilde_sq_order: u64, h_a: u64, involution_closed: bool) -> DivisibilityReport {
    let square_part_divides = pic_tilde_sq_order != 0 && h_o.is_multiple_of(pic_tilde_sq_order);
    let free_action_divides = (involution_closed && h_a % 2 == 1).then(|| h_a != 0 && h_o.is_multiple_of(h_a));
    DivisibilityReport { square_part_divides, free_action_divides }
}
