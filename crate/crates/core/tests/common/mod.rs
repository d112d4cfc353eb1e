//! An explicit Z-lattice model of a biquadratic CM field, used as an oracle for the
//! valuation-based conductor and unit computations.
#![allow(dead_code, clippy::needless_range_loop)]

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

pub type R = Ratio<i128>;
/// Coordinates in the basis `1, sqrt(d), sqrt(-m), sqrt(d) sqrt(-m)`.
pub type Elt = [R; 4];

pub fn r(n: i128) -> R {
    R::from_integer(n)
}

pub fn rf(n: i128, d: i128) -> R {
    R::new(n, d)
}

#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub d: i128,
    pub m: i128,
}

impl Field {
    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let (d, m) = (r(self.d), r(self.m));
        [
            a[0] * b[0] + d * a[1] * b[1] - m * a[2] * b[2] - d * m * a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] - m * (a[2] * b[3] + a[3] * b[2]),
            a[0] * b[2] + a[2] * b[0] + d * (a[1] * b[3] + a[3] * b[1]),
            a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1],
        ]
    }

    fn in_o_f(&self, u: R, v: R) -> bool {
        (r(2) * u).is_integer() && (u * u - r(self.d) * v * v).is_integer()
    }

    pub fn is_integral(&self, x: &Elt) -> bool {
        let (d, m) = (r(self.d), r(self.m));
        let trace_ok = self.in_o_f(r(2) * x[0], r(2) * x[1]);
        let n0 = x[0] * x[0] + d * x[1] * x[1] + m * x[2] * x[2] + m * d * x[3] * x[3];
        let n1 = r(2) * x[0] * x[1] + r(2) * m * x[2] * x[3];
        trace_ok && self.in_o_f(n0, n1)
    }

    pub fn trace(&self, x: &Elt) -> R {
        r(4) * x[0]
    }

    pub fn o_f(&self) -> Lattice {
        Lattice::span(&[one(), self.omega(self.d, 1)])
    }

    /// `(1 + sqrt(s))/2` or `sqrt(s)` placed in coordinate `slot`.
    fn omega(&self, s: i128, slot: usize) -> Elt {
        let mut e = zero();
        if s.rem_euclid(4) == 1 {
            e[0] = rf(1, 2);
            e[slot] = rf(1, 2);
        } else {
            e[slot] = r(1);
        }
        e
    }

    /// `sqrt(-k)` for an imaginary subfield radicand, as an element of `K`.
    fn sqrt_neg(&self, k: i128) -> Elt {
        let mut e = zero();
        if k == self.m {
            e[2] = r(1);
        } else {
            // -k = -d m / s^2
            let s2 = self.d * self.m / k;
            let s = (s2 as f64).sqrt().round() as i128;
            assert_eq!(s * s, s2);
            e[3] = rf(1, s);
        }
        e
    }

    fn other_radicand(&self) -> i128 {
        let mut n = self.d * self.m;
        let mut k = 2;
        while k * k <= n {
            while n % (k * k) == 0 {
                n /= k * k;
            }
            k += 1;
        }
        n
    }

    fn quadratic_generator(&self, k: i128) -> Elt {
        let s = self.sqrt_neg(k);
        if (-k).rem_euclid(4) == 1 {
            let mut e = s.map(|c| c / r(2));
            e[0] += rf(1, 2);
            e
        } else {
            s
        }
    }

    pub fn ring_closure(&self, gens: &[Elt]) -> Lattice {
        let mut all = gens.to_vec();
        all.push(one());
        let mut lat = Lattice::span(&all);
        loop {
            let mut next = lat.rows.clone();
            for a in &lat.rows {
                for b in &lat.rows {
                    next.push(self.mul(a, b));
                }
            }
            let grown = Lattice::span(&next);
            if grown == lat {
                return lat;
            }
            lat = grown;
        }
    }

    /// The maximal order, by 2-saturating the compositum of the quadratic rings.
    pub fn o_k(&self) -> Lattice {
        let gens = [self.omega(self.d, 1), self.quadratic_generator(self.m), self.quadratic_generator(self.other_radicand())];
        let mut lat = self.ring_closure(&gens);
        'outer: loop {
            let n = lat.rows.len();
            for mask in 1u32..(1 << n) {
                let mut x = zero();
                for (i, row) in lat.rows.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        x = add(&x, row);
                    }
                }
                let half = x.map(|c| c / r(2));
                if self.is_integral(&half) && !lat.contains(&half) {
                    let mut gens = lat.rows.clone();
                    gens.push(half);
                    lat = self.ring_closure(&gens);
                    continue 'outer;
                }
            }
            return lat;
        }
    }

    pub fn discriminant(&self, lat: &Lattice) -> R {
        let n = lat.rows.len();
        let mut g = vec![vec![r(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.trace(&self.mul(&lat.rows[i], &lat.rows[j]));
            }
        }
        det(g)
    }

    /// `O_F + {z in O_K : conj(z) = -z}`, or `O_F + {z in O_K : conj(z) = i z}` when `m = 1`.
    pub fn b0(&self, o_k: &Lattice) -> Lattice {
        let mut rows = self.o_f().rows;
        if self.m == 1 {
            // Coordinates in which conj(z) = i z reads y0 = y1 = 0.
            let fwd = |x: &Elt| [x[0] + x[2], x[1] + x[3], x[2], x[3]];
            let back = |y: &Elt| [y[0] - y[2], y[1] - y[3], y[2], y[3]];
            let moved = Lattice::span(&o_k.rows.iter().map(fwd).collect::<Vec<_>>());
            rows.extend(moved.rows.iter().filter(|v| v[0].is_zero_r() && v[1].is_zero_r()).map(back));
        } else {
            rows.extend(o_k.rows.iter().filter(|v| v[0].is_zero_r() && v[1].is_zero_r()).cloned());
        }
        Lattice::span(&rows)
    }

    /// `O_F + c O_K` for an ideal `c` of `O_F` given by a Z-basis.
    pub fn order_with_conductor(&self, c: &Lattice, o_k: &Lattice) -> Lattice {
        let mut rows = self.o_f().rows;
        for a in &c.rows {
            for w in &o_k.rows {
                rows.push(self.mul(a, w));
            }
        }
        Lattice::span(&rows)
    }

    /// `{a in O_F : a O_K in B}`, found inside `O_F / 2^k O_F`.
    pub fn conductor(&self, b: &Lattice, o_k: &Lattice) -> Lattice {
        let o_f = self.o_f();
        let bound = 16i128;
        let mut rows: Vec<Elt> = o_f.rows.iter().map(|v| v.map(|c| c * r(bound))).collect();
        for s in 0..bound {
            for t in 0..bound {
                let a = add(&scale(&o_f.rows[0], r(s)), &scale(&o_f.rows[1], r(t)));
                if o_k.rows.iter().all(|w| b.contains(&self.mul(&a, w))) {
                    rows.push(a);
                }
            }
        }
        for row in &o_f.rows {
            let big = scale(row, r(bound));
            assert!(o_k.rows.iter().all(|w| b.contains(&self.mul(&big, w))), "conductor search bound too small");
        }
        Lattice::span(&rows)
    }

    /// The radical of `2 O_F`.
    pub fn dyadic_radical(&self) -> Lattice {
        let two = scale(&one(), r(2));
        let pi = match self.d.rem_euclid(4) {
            1 => return Lattice::span(&[two, scale(&self.omega(self.d, 1), r(2))]),
            2 => [r(0), r(1), r(0), r(0)],
            _ => [r(1), r(1), r(0), r(0)],
        };
        let rows = [two, scale(&self.omega(self.d, 1), r(2)), pi, self.mul(&pi, &self.omega(self.d, 1))];
        Lattice::span(&rows)
    }

    /// Every order `B` with `lower <= B <= o_k`, assuming the quotient has rank at most two.
    pub fn intermediate_orders(&self, lower: &Lattice, o_k: &Lattice) -> Vec<Lattice> {
        let index = lower.index_in(o_k);
        let k = index as i128;
        let mut reps: Vec<Elt> = Vec::new();
        for c in 0..k.pow(4) {
            let mut x = zero();
            let mut cc = c;
            for row in &o_k.rows {
                x = add(&x, &scale(row, r(cc % k)));
                cc /= k;
            }
            if !reps.iter().any(|y| lower.contains(&add(&x, &neg(y)))) {
                reps.push(x);
            }
        }
        assert_eq!(reps.len() as u64, index);
        let mut found: Vec<Lattice> = Vec::new();
        let f_basis = self.o_f().rows;
        for a in &reps {
            for b in &reps {
                let mut rows = lower.rows.clone();
                rows.push(*a);
                rows.push(*b);
                let lat = Lattice::span(&rows);
                if found.contains(&lat) {
                    continue;
                }
                let module = lat.rows.iter().all(|x| f_basis.iter().all(|f| lat.contains(&self.mul(f, x))));
                let ring = lat.rows.iter().all(|x| lat.rows.iter().all(|y| lat.contains(&self.mul(x, y))));
                if module && ring {
                    found.push(lat);
                }
            }
        }
        found
    }

    /// Generator of the roots of unity and its order.
    pub fn root_of_unity(&self) -> (Elt, u32) {
        match (self.d, self.m) {
            (2, 1) => ([r(0), rf(1, 2), r(0), rf(1, 2)], 8),
            (3, 1) => ([r(0), rf(1, 2), rf(1, 2), r(0)], 12),
            (_, 1) => ([r(0), r(0), r(1), r(0)], 4),
            _ => {
                for k in [self.m, self.other_radicand()] {
                    if k == 3 {
                        let mut z = self.sqrt_neg(3).map(|c| c / r(2));
                        z[0] = rf(-1, 2);
                        return (neg(&z), 6);
                    }
                }
                ([r(-1), r(0), r(0), r(0)], 2)
            }
        }
    }

    /// `[mu_K : mu_K intersected with B]`.
    pub fn root_index(&self, b: &Lattice) -> u32 {
        let (z, w) = self.root_of_unity();
        let mut x = one();
        let mut kept = 0;
        for _ in 0..w {
            if b.contains(&x) {
                kept += 1;
            }
            x = self.mul(&x, &z);
        }
        assert_eq!(x, one());
        w / kept
    }
}

trait ZeroR {
    fn is_zero_r(&self) -> bool;
}

impl ZeroR for R {
    fn is_zero_r(&self) -> bool {
        *self.numer() == 0
    }
}

pub fn zero() -> Elt {
    [r(0); 4]
}

pub fn one() -> Elt {
    [r(1), r(0), r(0), r(0)]
}

fn add(a: &Elt, b: &Elt) -> Elt {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn neg(a: &Elt) -> Elt {
    a.map(|c| -c)
}

fn scale(a: &Elt, s: R) -> Elt {
    a.map(|c| c * s)
}

fn det(mut g: Vec<Vec<R>>) -> R {
    let n = g.len();
    let mut acc = r(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !g[i][col].is_zero_r()) else {
            return r(0);
        };
        if piv != col {
            g.swap(piv, col);
            acc = -acc;
        }
        acc *= g[col][col];
        for i in col + 1..n {
            let f = g[i][col] / g[col][col];
            for j in col..n {
                let t = g[col][j];
                g[i][j] -= f * t;
            }
        }
    }
    acc
}

/// A full-rank or partial Z-lattice in `Q^4`, kept in row Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub rows: Vec<Elt>,
}

impl Lattice {
    pub fn span(gens: &[Elt]) -> Lattice {
        let den = gens.iter().flatten().fold(1i128, |acc, c| acc.lcm(c.denom()));
        let mut m: Vec<[i128; 4]> = gens.iter().map(|v| v.map(|c| (c * r(den)).to_integer())).collect();
        let mut out = Vec::new();
        let mut row = 0;
        for col in 0..4 {
            loop {
                let nz: Vec<usize> = (row..m.len()).filter(|&i| m[i][col] != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        m.swap(row, i);
                        if m[row][col] < 0 {
                            m[row] = m[row].map(|c| -c);
                        }
                        for k in 0..row {
                            let q = Integer::div_floor(&m[k][col], &m[row][col]);
                            for j in 0..4 {
                                m[k][j] -= q * m[row][j];
                            }
                        }
                        row += 1;
                    }
                    break;
                }
                let p = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
                for &i in &nz {
                    if i != p {
                        let q = m[i][col] / m[p][col];
                        for j in 0..4 {
                            m[i][j] -= q * m[p][j];
                        }
                    }
                }
            }
        }
        for v in m.iter().take(row) {
            out.push(v.map(|c| rf(c, den)));
        }
        Lattice { rows: out }
    }

    pub fn contains(&self, x: &Elt) -> bool {
        let mut rows = self.rows.clone();
        rows.push(*x);
        Lattice::span(&rows) == *self
    }

    fn volume(&self) -> R {
        assert_eq!(self.rows.len(), 4);
        det(self.rows.iter().map(|v| v.to_vec()).collect()).abs()
    }

    /// `[other : self]` for `self` contained in `other`.
    pub fn index_in(&self, other: &Lattice) -> u64 {
        let q = self.volume() / other.volume();
        assert!(q.is_integer());
        q.to_integer() as u64
    }

    /// Index within a rank-2 sublattice of the first two coordinates.
    pub fn index_in_plane(&self, other: &Lattice) -> u64 {
        let area = |l: &Lattice| (l.rows[0][0] * l.rows[1][1] - l.rows[0][1] * l.rows[1][0]).abs();
        let q = area(self) / area(other);
        assert!(q.is_integer());
        q.to_integer() as u64
    }
}
