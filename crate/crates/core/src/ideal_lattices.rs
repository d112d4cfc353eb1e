//! Fractional ideals of quadratic orders as rank-2 lattices in Hermite normal form.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{field_disc, isqrt, xgcd};
use crate::error::{Error, Result};
use crate::quadratic_core::{forms, Disc, Form, Indefinite, QuadraticData};
use crate::Q;

/// The order of conductor `conductor` in `Q(sqrt(m))`, written `Z[theta]` with
/// `theta = (sigma + sqrt(D)) / 2`, `D = conductor^2 * disc(F)`, `sigma = D mod 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadOrder {
    field: Disc,
    conductor: u32,
}

impl QuadOrder {
    pub fn new(m: i64, conductor: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::OutOfDomain { what: "conductor", value: 0 });
        }
        Ok(QuadOrder { field: Disc::new(m)?, conductor })
    }

    pub fn maximal(m: i64) -> Result<Self> {
        Self::new(m, 1)
    }

    pub fn field(&self) -> Disc {
        self.field
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn disc(&self) -> i128 {
        let f = self.conductor as i128;
        f * f * self.field.disc() as i128
    }

    pub fn sigma(&self) -> i128 {
        self.disc().rem_euclid(2)
    }

    /// `theta^2 = sigma * theta + n`.
    pub fn n(&self) -> i128 {
        (self.disc() - self.sigma()) / 4
    }

    /// Converts `u + v*theta` to `x + y*sqrt(m)`.
    pub fn to_field(&self, u: &Q, v: &Q) -> QuadNumber {
        let k: i64 = if field_disc(self.field.m()) == self.field.m() { 1 } else { 2 };
        let two = BigRational::from_integer(BigInt::from(2));
        let x = u + v * BigRational::from_integer(BigInt::from(self.sigma())) / &two;
        let y = v * BigRational::from_integer(BigInt::from(self.conductor as i64 * k)) / two;
        QuadNumber { m: self.field.m(), x, y }
    }
}

/// An element `x + y*sqrt(m)` of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadNumber {
    pub m: i64,
    pub x: Q,
    pub y: Q,
}

impl QuadNumber {
    pub fn norm(&self) -> Q {
        &self.x * &self.x - BigRational::from_integer(BigInt::from(self.m)) * &self.y * &self.y
    }

    pub fn conjugate(&self) -> QuadNumber {
        QuadNumber { m: self.m, x: self.x.clone(), y: -&self.y }
    }

    pub fn neg(&self) -> QuadNumber {
        QuadNumber { m: self.m, x: -&self.x, y: -&self.y }
    }

    /// Sign of the real embedding with `sqrt(m) > 0`; `m > 0` only.
    pub fn is_positive(&self) -> bool {
        debug_assert!(self.m > 0);
        let xs = self.x.signum();
        let ys = self.y.signum();
        if !xs.is_negative() && !ys.is_negative() {
            return !(self.x.is_zero() && self.y.is_zero());
        }
        if xs.is_negative() && ys.is_negative() {
            return false;
        }
        let x2 = &self.x * &self.x;
        let my2 = BigRational::from_integer(BigInt::from(self.m)) * &self.y * &self.y;
        if xs.is_positive() {
            x2 > my2
        } else {
            my2 > x2
        }
    }

    pub fn is_totally_positive(&self) -> bool {
        self.is_positive() && self.conjugate().is_positive()
    }
}

/// Principality with respect to all generators or to totally positive generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipalMode {
    Wide,
    Narrow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Principality {
    pub principal: bool,
    pub generator: Option<QuadNumber>,
}

/// `scale * (Z*a + Z*(b + theta))` with `a > 0`, `0 <= b < a`, `scale > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadLattice {
    order: QuadOrder,
    a: BigInt,
    b: BigInt,
    scale: Q,
}

/// Hermite normal form `(A, B, E)` of the integer lattice spanned by `vecs`:
/// the lattice is `Z*(A, 0) + Z*(B, E)` with `A, E > 0`, `0 <= B < A`.
pub fn hnf2(vecs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt, BigInt)> {
    let mut pivot = (BigInt::zero(), BigInt::zero());
    let mut first_col = BigInt::zero();
    for (x, y) in vecs {
        if y.is_zero() {
            first_col = first_col.gcd(x);
            continue;
        }
        let (g, u, w) = xgcd(&pivot.1, y);
        let residual = (&(y / &g) * &pivot.0) - (&(&pivot.1 / &g) * x);
        first_col = first_col.gcd(&residual);
        pivot = (&u * &pivot.0 + &w * x, g);
    }
    if first_col.is_zero() || pivot.1.is_zero() {
        return Err(Error::Degenerate);
    }
    let b = pivot.0.mod_floor(&first_col);
    Ok((first_col, b, pivot.1))
}

impl QuadLattice {
    /// The order itself as an ideal.
    pub fn unit(order: QuadOrder) -> Self {
        QuadLattice { order, a: BigInt::one(), b: BigInt::zero(), scale: BigRational::one() }
    }

    /// The principal ideal `r * O` for a rational `r != 0`.
    pub fn rational(order: QuadOrder, r: Q) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(QuadLattice { scale: r.abs(), ..Self::unit(order) })
    }

    /// `scale * [a, b + theta]`, checked to be closed under multiplication by `theta`.
    pub fn from_hnf(order: QuadOrder, a: BigInt, b: BigInt, scale: Q) -> Result<Self> {
        if !a.is_positive() || scale.is_zero() {
            return Err(Error::Degenerate);
        }
        let b = b.mod_floor(&a);
        let lat = QuadLattice { order, a, b, scale: scale.abs() };
        if !(lat.norm_of_b_theta() % &lat.a).is_zero() {
            return Err(Error::NotProperIdeal);
        }
        Ok(lat)
    }

    /// The O-module generated by elements `u + v*theta` with rational coordinates.
    pub fn from_generators(order: QuadOrder, gens: &[(Q, Q)]) -> Result<Self> {
        let mut den = BigInt::one();
        for (u, v) in gens {
            den = den.lcm(u.denom()).lcm(v.denom());
        }
        let n = BigInt::from(order.n());
        let sigma = BigInt::from(order.sigma());
        let mut vecs = Vec::new();
        for (u, v) in gens {
            let ui = (u * BigRational::from_integer(den.clone())).to_integer();
            let vi = (v * BigRational::from_integer(den.clone())).to_integer();
            // theta * (u + v theta) = v n + (u + v sigma) theta
            vecs.push((&vi * &n, &ui + &vi * &sigma));
            vecs.push((ui, vi));
        }
        Self::from_integer_vectors(order, &vecs, BigRational::new(BigInt::one(), den))
    }

    fn from_integer_vectors(order: QuadOrder, vecs: &[(BigInt, BigInt)], scale: Q) -> Result<Self> {
        let (big_a, big_b, e) = hnf2(vecs)?;
        if !(&big_a % &e).is_zero() || !(&big_b % &e).is_zero() {
            return Err(Error::NotProperIdeal);
        }
        Self::from_hnf(order, &big_a / &e, &big_b / &e, scale * BigRational::from_integer(e))
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    /// `(a, b, scale)`.
    pub fn hnf(&self) -> (&BigInt, &BigInt, &Q) {
        (&self.a, &self.b, &self.scale)
    }

    fn norm_of_b_theta(&self) -> BigInt {
        let s = BigInt::from(self.order.sigma());
        &self.b * &self.b + &s * &self.b - BigInt::from(self.order.n())
    }

    /// Index norm relative to the order: `scale^2 * a`.
    pub fn norm(&self) -> Q {
        &self.scale * &self.scale * BigRational::from_integer(self.a.clone())
    }

    /// The form `N(x a + y (b + theta)) / a`.
    pub fn associated_form(&self) -> Form {
        let a = i128::try_from(&self.a).expect("coefficient overflow");
        let b = i128::try_from(&self.b).expect("coefficient overflow");
        let sigma = self.order.sigma();
        let c = (b * b + sigma * b - self.order.n()) / a;
        Form::new(a, 2 * b + sigma, c)
    }

    /// Proper (equivalently invertible) ideals have primitive associated forms.
    pub fn is_proper(&self) -> bool {
        self.associated_form().is_primitive()
    }

    pub fn conjugate(&self) -> QuadLattice {
        let s = BigInt::from(self.order.sigma());
        let b = (-&self.b - s).mod_floor(&self.a);
        QuadLattice { order: self.order, a: self.a.clone(), b, scale: self.scale.clone() }
    }

    pub fn mul(&self, other: &QuadLattice) -> Result<QuadLattice> {
        if self.order != other.order {
            return Err(Error::OrderMismatch);
        }
        let n = BigInt::from(self.order.n());
        let s = BigInt::from(self.order.sigma());
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let vecs = [
            (a1 * a2, BigInt::zero()),
            (a1 * b2, a1.clone()),
            (a2 * b1, a2.clone()),
            (b1 * b2 + &n, b1 + b2 + &s),
        ];
        Self::from_integer_vectors(self.order, &vecs, &self.scale * &other.scale)
    }

    pub fn pow(&self, k: u32) -> Result<QuadLattice> {
        let mut acc = QuadLattice::unit(self.order);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Whether `u + v*theta` lies in the lattice.
    pub fn contains(&self, u: &Q, v: &Q) -> bool {
        let y = v / &self.scale;
        if !y.is_integer() {
            return false;
        }
        let rest = u / &self.scale - &y * BigRational::from_integer(self.b.clone());
        rest.is_integer() && (rest.to_integer() % &self.a).is_zero()
    }

    /// Decides principality by walking the reduced cycle of the associated form.
    pub fn is_principal(&self, mode: PrincipalMode) -> Result<Principality> {
        if !self.is_proper() {
            return Err(Error::NotProperIdeal);
        }
        let form = self.associated_form();
        let found = if self.order.disc() < 0 {
            definite_unit_representation(&form)
        } else {
            let targets: &[i128] = match mode {
                PrincipalMode::Wide => &[1, -1],
                PrincipalMode::Narrow => &[1],
            };
            Indefinite::new(self.order.disc())
                .find_leading(form, targets)
                .map(|(x, y, _)| (x, y))
        };
        let Some((x, y)) = found else {
            return Ok(Principality { principal: false, generator: None });
        };
        let u = BigRational::from_integer(&x * &self.a + &y * &self.b) * &self.scale;
        let v = BigRational::from_integer(y) * &self.scale;
        let mut g = self.order.to_field(&u, &v);
        if self.order.disc() > 0 && !g.is_positive() {
            g = g.neg();
        }
        Ok(Principality { principal: true, generator: Some(g) })
    }
}

fn definite_unit_representation(f: &Form) -> Option<(BigInt, BigInt)> {
    if forms::reduce_definite(*f).a != 1 {
        return None;
    }
    let d = -f.disc();
    let ybound = isqrt(4 * f.a / d + 1) + 1;
    let xbound = isqrt(4 * f.c / d + 1) + 1;
    for y in -ybound..=ybound {
        for x in -xbound..=xbound {
            if f.a * x * x + f.b * x * y + f.c * y * y == 1 {
                return Some((BigInt::from(x), BigInt::from(y)));
            }
        }
    }
    None
}

/// A prime of the maximal order above a rational prime `q` ramified in `Q(sqrt(m))`.
pub fn ramified_prime(m: i64, q: u64) -> Result<QuadLattice> {
    let order = QuadOrder::maximal(m)?;
    if order.disc() % q as i128 != 0 {
        return Err(Error::OutOfDomain { what: "ramified prime", value: q as i64 });
    }
    let (s, n, qq) = (order.sigma(), order.n(), q as i128);
    let b = (0..qq)
        .find(|b| (b * b + s * b - n).rem_euclid(qq) == 0)
        .expect("ramified prime has a root");
    QuadLattice::from_hnf(order, BigInt::from(q), BigInt::from(b), BigRational::one())
}

/// The ideal `[4, 1 + sqrt(d)]` of `A = Z[sqrt(d)]`, `d = 5 mod 8`.
pub fn dyadic_ideal(d: i64) -> Result<QuadLattice> {
    if d.rem_euclid(8) != 5 {
        return Err(Error::OutOfDomain { what: "radicand 5 mod 8", value: d });
    }
    let order = QuadOrder::new(d, 2)?;
    QuadLattice::from_hnf(order, BigInt::from(4), BigInt::one(), BigRational::one())
}

/// Order of the kernel of `Pic(A) -> Pic(O_F)` for `d = 5 mod 8`:
/// 3 when the fundamental unit lies in `Z[sqrt(d)]`, else 1.
pub fn capitulation_kernel_order<S: QuadraticData + ?Sized>(d: i64, data: &S) -> Result<u8> {
    if d < 5 || d.rem_euclid(8) != 5 {
        return Err(Error::OutOfDomain { what: "radicand 5 mod 8", value: d });
    }
    let unit = data.fundamental_unit(d)?;
    Ok(if unit.in_z_sqrt_m() { 3 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_squarefree, q_int};
    use crate::quadratic_core::Direct;
    use proptest::prelude::*;

    fn box_principal(lat: &QuadLattice, bound: i128) -> bool {
        // Integral ideals with scale 1 only: look for x*a + y*(b + theta) of norm +-a.
        let f = lat.associated_form();
        (-bound..=bound).any(|x| (-bound..=bound).any(|y| (f.a * x * x + f.b * x * y + f.c * y * y).abs() == 1))
    }

    #[test]
    fn hnf_examples() {
        let a = dyadic_ideal(37).unwrap();
        assert_eq!(a.norm(), q_int(4));
        let cube = a.pow(3).unwrap();
        let eight = QuadLattice::rational(a.order(), q_int(8)).unwrap();
        assert_eq!(cube, eight);
        assert_eq!(cube.hnf(), (&BigInt::one(), &BigInt::zero(), &q_int(8)));
        assert_eq!(cube.norm(), q_int(64));
    }

    #[test]
    fn dyadic_ideal_principality() {
        for d in [5i64, 13, 29, 37, 53, 61, 101] {
            let a = dyadic_ideal(d).unwrap();
            assert!(a.is_proper());
            let p = a.is_principal(PrincipalMode::Wide).unwrap();
            let kernel = capitulation_kernel_order(d, &Direct).unwrap();
            assert_eq!(p.principal, kernel == 1, "d = {d}");
            if let Some(g) = p.generator {
                assert_eq!(g.norm().abs(), q_int(4));
            }
        }
        assert_eq!(capitulation_kernel_order(37, &Direct), Ok(3));
        assert_eq!(capitulation_kernel_order(13, &Direct), Ok(1));
        assert_eq!(capitulation_kernel_order(5, &Direct), Ok(1));
    }

    #[test]
    fn ramified_prime_of_q_sqrt34() {
        let p2 = ramified_prime(34, 2).unwrap();
        let w = p2.is_principal(PrincipalMode::Wide).unwrap();
        assert!(w.principal);
        let g = w.generator.unwrap();
        assert_eq!(g.norm().abs(), q_int(2));
        assert!(!p2.is_principal(PrincipalMode::Narrow).unwrap().principal || g.norm() > q_int(0));
        let p2_10 = ramified_prime(10, 2).unwrap();
        assert!(!p2_10.is_principal(PrincipalMode::Wide).unwrap().principal);
    }

    #[test]
    fn imaginary_principality() {
        let p = ramified_prime(-5, 2).unwrap();
        assert!(!p.is_principal(PrincipalMode::Wide).unwrap().principal);
        let sq = p.pow(2).unwrap();
        let r = sq.is_principal(PrincipalMode::Wide).unwrap();
        assert!(r.principal);
        assert_eq!(r.generator.unwrap().norm(), q_int(4));
    }

    #[test]
    fn cycle_search_agrees_with_box_search_for_small_fields() {
        for m in [6i64, 10, 15, 26, 30, 34, 35, 39, 42, 51, 65, 66, 70, 78, 85, 87, 91, 95] {
            let order = QuadOrder::maximal(m).unwrap();
            for q in crate::arith::factorize(order.disc() as u64) {
                let p = ramified_prime(m, q.0).unwrap();
                let fast = p.is_principal(PrincipalMode::Wide).unwrap().principal;
                assert_eq!(fast, box_principal(&p, 400), "m = {m}, q = {}", q.0);
            }
        }
    }

    proptest! {
        #[test]
        fn cube_of_dyadic_ideal_is_eight(k in 0i64..250) {
            let d = 8 * k + 5;
            prop_assume!(is_squarefree(d));
            let a = dyadic_ideal(d).unwrap();
            let eight = QuadLattice::rational(a.order(), q_int(8)).unwrap();
            prop_assert_eq!(a.pow(3).unwrap(), eight);
        }

        #[test]
        fn ideal_times_conjugate_is_norm(m in 2i64..400, q_index in 0usize..4) {
            prop_assume!(is_squarefree(m));
            let order = QuadOrder::maximal(m).unwrap();
            let qs = crate::arith::factorize(order.disc() as u64);
            let q = qs[q_index % qs.len()].0;
            let p = ramified_prime(m, q).unwrap();
            let prod = p.mul(&p.conjugate()).unwrap();
            prop_assert_eq!(prod, QuadLattice::rational(order, p.norm()).unwrap());
        }

        #[test]
        fn generator_has_ideal_norm(m in 2i64..300) {
            prop_assume!(is_squarefree(m));
            let order = QuadOrder::maximal(m).unwrap();
            for (q, _) in crate::arith::factorize(order.disc() as u64) {
                let p = ramified_prime(m, q).unwrap();
                if let Some(g) = p.is_principal(PrincipalMode::Wide).unwrap().generator {
                    prop_assert_eq!(g.norm().abs(), q_int(q as i64));
                }
            }
        }

        #[test]
        fn norm_is_multiplicative(m in 2i64..300, e1 in 1u32..4, e2 in 1u32..4) {
            prop_assume!(is_squarefree(m));
            let order = QuadOrder::maximal(m).unwrap();
            let qs = crate::arith::factorize(order.disc() as u64);
            let p = ramified_prime(m, qs[0].0).unwrap().pow(e1).unwrap();
            let r = ramified_prime(m, qs[qs.len() - 1].0).unwrap().pow(e2).unwrap();
            prop_assert_eq!(p.mul(&r).unwrap().norm(), p.norm() * r.norm());
        }
    }
}
