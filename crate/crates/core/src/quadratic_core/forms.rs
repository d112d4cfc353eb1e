//! Binary quadratic forms `a x^2 + b xy + c y^2`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{divisors, isqrt};

/// An integral binary quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Form {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c) == 1
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.a) * x * x + BigInt::from(self.b) * x * y + BigInt::from(self.c) * y * y
    }
}

/// Reduced positive definite forms of discriminant `disc < 0`.
pub fn reduced_definite_forms(disc: i64) -> Vec<Form> {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1);
    let d = disc as i128;
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 || (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            out.push(Form::new(a, b, c));
        }
        a += 1;
    }
    out
}

/// Reduces a positive definite form by the classical Gauss step.
pub fn reduce_definite(f: Form) -> Form {
    let Form { mut a, mut b, mut c } = f;
    assert!(a > 0 && b * b - 4 * a * c < 0);
    loop {
        if b > a || b <= -a {
            let two_a = 2 * a;
            let r = (b + a - 1).rem_euclid(two_a) - (a - 1);
            let t = (r - b) / two_a;
            c += t * (b + a * t);
            b = r;
        }
        if a > c || (a == c && b < 0) {
            core::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        return Form::new(a, b, c);
    }
}

/// Positive definite form class number: the number of reduced primitive forms.
pub fn definite_class_count(disc: i64) -> u64 {
    reduced_definite_forms(disc)
        .into_iter()
        .filter(Form::is_primitive)
        .count() as u64
}

/// An integral 2x2 matrix, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform(pub [BigInt; 4]);

impl Transform {
    pub fn identity() -> Self {
        Transform([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()])
    }

    /// Right-multiplies by `[[0, -1], [1, t]]`.
    fn push_step(&mut self, t: i128) {
        let [p, q, r, s] = &self.0;
        let t = BigInt::from(t);
        self.0 = [q.clone(), -p + q * &t, s.clone(), -r + s * &t];
    }

    pub fn first_column(&self) -> (BigInt, BigInt) {
        (self.0[0].clone(), self.0[2].clone())
    }
}

/// Indefinite forms of a fixed non-square discriminant.
#[derive(Debug, Clone, Copy)]
pub struct Indefinite {
    disc: i128,
    root: i128,
}

impl Indefinite {
    pub fn new(disc: i128) -> Self {
        let root = isqrt(disc);
        assert!(disc > 0 && root * root != disc, "discriminant must be a positive non-square");
        Indefinite { disc, root }
    }

    pub fn is_reduced(&self, f: &Form) -> bool {
        let s = self.root;
        f.b > 0 && f.b <= s && 2 * f.a.abs() > s - f.b && 2 * f.a.abs() <= s + f.b
    }

    /// One reduction step. Returns the new form and the step parameter `t`;
    /// the transform is `(x, y) -> (-y, x + t y)`.
    pub fn rho(&self, f: &Form) -> (Form, i128) {
        let c = f.c;
        assert!(c != 0);
        let two_c = 2 * c.abs();
        let upper = if c.abs() > self.root { c.abs() } else { self.root };
        let b_new = upper - (upper + f.b).rem_euclid(two_c);
        let t = (b_new + f.b) / (2 * c);
        let c_new = (b_new * b_new - self.disc) / (4 * c);
        (Form::new(c, b_new, c_new), t)
    }

    /// Reduces `f`, tracking the accumulated transform.
    pub fn reduce(&self, f: Form, m: &mut Transform) -> Form {
        assert_eq!(f.disc(), self.disc);
        let mut g = f;
        while !self.is_reduced(&g) {
            let (next, t) = self.rho(&g);
            m.push_step(t);
            g = next;
        }
        g
    }

    pub fn reduced_forms(&self) -> Vec<Form> {
        let s = self.root;
        let mut out = Vec::new();
        for b in 1..=s {
            if (self.disc - b) % 2 != 0 {
                continue;
            }
            let n = (self.disc - b * b) / 4;
            for a in divisors(n as u64) {
                let a = a as i128;
                if 2 * a > s - b && 2 * a <= s + b {
                    out.push(Form::new(a, b, -(n / a)));
                    out.push(Form::new(-a, b, n / a));
                }
            }
        }
        out
    }

    /// The cycle of the reduced form `f` under `rho`.
    pub fn cycle(&self, f: Form) -> Vec<Form> {
        debug_assert!(self.is_reduced(&f));
        let mut out = alloc::vec![f];
        let mut g = self.rho(&f).0;
        while g != f {
            out.push(g);
            g = self.rho(&g).0;
        }
        out
    }

    /// Number of cycles of reduced primitive forms, which is the narrow class number.
    pub fn cycle_count(&self) -> u64 {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for f in self.reduced_forms() {
            if !f.is_primitive() || seen.contains(&f) {
                continue;
            }
            count += 1;
            for g in self.cycle(f) {
                seen.insert(g);
            }
        }
        count
    }

    /// Walks the cycle of `f` looking for a form whose leading coefficient is in `targets`.
    /// On success returns `(x, y)` with `f(x, y)` equal to that coefficient.
    pub fn find_leading(&self, f: Form, targets: &[i128]) -> Option<(BigInt, BigInt, i128)> {
        let mut m = Transform::identity();
        let start = self.reduce(f, &mut m);
        let mut g = start;
        loop {
            if targets.contains(&g.a) {
                let (x, y) = m.first_column();
                return Some((x, y, g.a));
            }
            let (next, t) = self.rho(&g);
            m.push_step(t);
            g = next;
            if g == start {
                return None;
            }
        }
    }
}
