//! Exact arithmetic behind class numbers and type numbers of superspecial
//! abelian surfaces over finite prime fields.
//!
//! Everything here is `no_std` with `alloc`; all counts are exact integers or
//! rationals.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod cm_orders;
pub mod error;
pub mod ideal_lattices;
pub mod orbit_engine;
pub mod quadratic_core;
pub mod quaternion_formulas;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Q = num_rational::BigRational;
