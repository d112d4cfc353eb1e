//! Closed formulas for the number of superspecial abelian surfaces over `F_p` in the
//! isogeny class of `sqrt(p)` (`H`), the number of their endomorphism rings (`T`), and
//! the class numbers of the three relevant quaternion orders.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{is_prime, q_frac, q_int, q_to_u64};
use crate::cm_orders::{build_b32, hk_biquadratic};
use crate::error::{Error, Result};
use crate::orbit_engine::{divisibility_checks, orbit_number, Contribution, OrbitInput};
use crate::quadratic_core::{kronecker, OrderData, QuadraticData};
use crate::Q;

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn to_count(value: Q, what: &'static str) -> Result<u64> {
    q_to_u64(&value).filter(|&v| v > 0).ok_or(Error::NonIntegral { what, value })
}

/// Number of supersingular elliptic curves over `F_p-bar`.
pub fn deuring_h(p: u64) -> Result<u64> {
    require_prime(p)?;
    if p <= 3 {
        return Ok(1);
    }
    let p = p as i64;
    let v = q_frac(p - 1, 12)
        + q_frac(1 - kronecker(-3, p) as i64, 3)
        + q_frac(1 - kronecker(-4, p) as i64, 4);
    to_count(v, "supersingular class number")
}

/// Number of `F_p`-isomorphism classes of supersingular elliptic curves.
pub fn deuring_t<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<u64> {
    require_prime(p)?;
    if p <= 3 {
        return Ok(1);
    }
    let h = q_int(data.class_number(-(p as i64))? as i64);
    let pi = p as i64;
    let tail = match p % 8 {
        1 | 5 => h / q_int(4),
        7 => q_frac(1, 4) + h / q_int(2),
        _ => q_frac(1, 4) + h,
    };
    let v = q_frac(pi - 1, 24) + q_frac(1 - kronecker(-3, pi) as i64, 6) + tail;
    to_count(v, "supersingular type number")
}

/// The quadratic inputs for one prime, gathered once.
#[derive(Debug, Clone)]
struct Inputs {
    p: u64,
    h_f: u64,
    zeta: Q,
    order: Option<OrderData>,
    h_p: Q,
    h_2p: Q,
    h_3p: Q,
}

impl Inputs {
    fn gather<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<Self> {
        require_prime(p)?;
        let pi = p as i64;
        let h_f = data.class_number(pi)?;
        let zeta = data.zeta_minus1(pi)?;
        let big = p >= 5;
        let h = |m: i64| -> Result<Q> { Ok(q_int(data.class_number(m)? as i64)) };
        Ok(Inputs {
            p,
            h_f,
            zeta,
            order: if p % 4 == 1 { Some(OrderData::compute(pi, data)?) } else { None },
            h_p: if big { h(-pi)? } else { q_int(0) },
            h_2p: if big { h(-2 * pi)? } else { q_int(0) },
            h_3p: if big { h(-3 * pi)? } else { q_int(0) },
        })
    }

    fn hf(&self) -> Q {
        q_int(self.h_f as i64)
    }

    fn varpi(&self) -> Option<u8> {
        self.order.as_ref().map(|o| o.varpi)
    }

    fn h_a(&self) -> Option<Q> {
        self.order.as_ref().map(|o| q_int(o.h_a as i64))
    }

    fn legendre_two(&self) -> i64 {
        kronecker(2, self.p as i64) as i64
    }

    /// `zeta/2 + (13 - 5(2/p)) h(-p)/8 + h(-2p)/4 + h(-3p)/6`, the `p = 3 mod 4` bracket.
    fn bracket_3mod4(&self) -> Q {
        &self.zeta / q_int(2)
            + q_int(13 - 5 * self.legendre_two()) * &self.h_p / q_int(8)
            + &self.h_2p / q_int(4)
            + &self.h_3p / q_int(6)
    }

    /// `h(F) h(-j p) / 2`, unchecked.
    fn hk(&self, j: u8) -> Q {
        let h = if j == 1 { &self.h_p } else { &self.h_3p };
        self.hf() * h / q_int(2)
    }
}

/// Rational values of every count for one prime, before any integrality is imposed.
#[derive(Debug, Clone)]
struct Raw {
    h: Q,
    t: Q,
    t_o1: Q,
    t_o8: Option<Q>,
    t_o16: Option<Q>,
    t_closed: Q,
    h_o4: Q,
    h_o4_informational: bool,
    h_o8: Option<Q>,
    h_b32: Option<Q>,
}

fn raw(inp: &Inputs) -> Raw {
    let p = inp.p;
    let hf = inp.hf();
    let z = &inp.zeta;
    if p <= 5 {
        let small = |a: i64, b: i64, c: i64| (q_int(a), q_int(b), q_int(c));
        let (h, t, t_o1) = match p {
            2 => small(1, 1, 1),
            3 => small(2, 2, 2),
            _ => small(3, 3, 1),
        };
        let h_o4 = q_int(if p == 3 { 2 } else { 1 });
        let one = (p == 5).then(|| q_int(1));
        return Raw {
            h,
            t: t.clone(),
            t_o1,
            t_o8: one.clone(),
            t_o16: one.clone(),
            t_closed: t,
            h_o4,
            h_o4_informational: false,
            h_o8: one,
            h_b32: None,
        };
    }
    if p % 4 == 3 {
        let bracket = inp.bracket_3mod4();
        let h_k1 = &hf * &inp.h_p;
        let h_o4 = q_int(3) * z * &hf + q_int(15 - 3 * inp.legendre_two()) * h_k1 / q_int(4);
        return Raw {
            h: &hf * &bracket,
            t: bracket.clone(),
            t_o1: bracket.clone(),
            t_o8: None,
            t_o16: None,
            t_closed: bracket,
            h_o4,
            h_o4_informational: true,
            h_o8: None,
            h_b32: None,
        };
    }
    let varpi = inp.varpi().expect("order data for p = 1 mod 4");
    let w = q_int(varpi as i64);
    let (hp, h3p) = (&inp.h_p, &inp.h_3p);
    let t_o1 = z / q_int(2) + hp / q_int(8) + h3p / q_int(6);
    let (t_o8, t_o16, h) = if p % 8 == 1 {
        (
            q_frac(9, 2) * z + hp / q_int(8),
            q_int(3) * z + hp / q_int(4) + h3p / q_int(2),
            &hf * (q_int(8) * z + hp / q_int(2) + q_frac(2, 3) * h3p),
        )
    } else {
        (
            q_frac(5, 2) * z + hp / q_int(8) + h3p / q_int(3),
            q_int(5) * z + hp / q_int(4) + h3p / q_int(6),
            &hf * ((q_int(45) + &w) / (q_int(2) * &w) * z
                + (q_int(9) + &w) / (q_int(8) * &w) * hp
                + q_frac(2, 3) * h3p),
        )
    };
    let t_closed = q_int(8) * z + hp / q_int(2) + q_frac(2, 3) * h3p;
    let h_o4 = if p % 8 == 1 {
        q_frac(9, 2) * z * &hf + inp.hk(1) / q_int(4)
    } else {
        q_frac(5, 2) * z * &hf + inp.hk(1) / q_int(4) + q_frac(2, 3) * inp.hk(3)
    };
    let (h_o8, h_b32) = if p % 8 == 5 && varpi == 1 {
        let hb = inp.hk(3);
        (q_int(3) * &hf * &t_o8 - q_int(2) * &hb, Some(hb))
    } else {
        (h_o4.clone(), None)
    };
    Raw {
        h,
        t: &t_o1 + &t_o8 + &t_o16,
        t_o1,
        t_o8: Some(t_o8),
        t_o16: Some(t_o16),
        t_closed,
        h_o4,
        h_o4_informational: false,
        h_o8: Some(h_o8),
        h_b32,
    }
}

/// Number of superspecial abelian surfaces in the isogeny class of `sqrt(p)`.
pub fn class_number_h<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<u64> {
    to_count(raw(&Inputs::gather(p, data)?).h, "surface class number")
}

/// `T(p)` and, for `p = 1 mod 4`, its three components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeCounts {
    pub total: u64,
    pub t_o1: u64,
    pub t_o8: Option<u64>,
    pub t_o16: Option<u64>,
}

pub fn type_number_t<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<TypeCounts> {
    let r = raw(&Inputs::gather(p, data)?);
    let total = to_count(r.t.clone(), "type number")?;
    if r.t != r.t_closed {
        return Err(Error::NonIntegral { what: "type number component sum", value: r.t - r.t_closed });
    }
    let comp = |v: Option<Q>, what| v.map(|v| to_count(v, what)).transpose();
    Ok(TypeCounts {
        total,
        t_o1: to_count(r.t_o1, "type number of O1")?,
        t_o8: comp(r.t_o8, "type number of O8")?,
        t_o16: comp(r.t_o16, "type number of O16")?,
    })
}

/// `h(O_4)` together with whether it comes from the informational `p = 3 mod 4` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberO4 {
    pub value: u64,
    pub informational: bool,
}

pub fn h_o4<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<ClassNumberO4> {
    let inp = Inputs::gather(p, data)?;
    if p > 5 && p % 4 == 1 {
        hk_biquadratic(p, 1, data)?;
        hk_biquadratic(p, 3, data)?;
    }
    let r = raw(&inp);
    Ok(ClassNumberO4 { value: to_count(r.h_o4, "class number of O4")?, informational: r.h_o4_informational })
}

pub fn h_o8<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<u64> {
    require_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::OutOfDomain { what: "prime 1 mod 4", value: p as i64 });
    }
    let r = raw(&Inputs::gather(p, data)?);
    to_count(r.h_o8.expect("defined for p = 1 mod 4"), "class number of O8")
}

/// All counts for one prime plus the named consistency checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCountRow {
    pub p: u64,
    pub h: Q,
    pub t: Q,
    pub t_o1: Q,
    pub t_o8: Option<Q>,
    pub t_o16: Option<Q>,
    pub h_o1: Q,
    pub h_o4: Q,
    pub h_o4_informational: bool,
    pub h_o8: Option<Q>,
    pub h_o16: Option<Q>,
    pub h_f: u64,
    pub h_a: Option<u64>,
    pub varpi: Option<u8>,
    pub zeta: Q,
    pub checks: Vec<(&'static str, bool)>,
}

impl SurfaceCountRow {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name)
    }
}

fn is_positive_integer(q: &Q) -> bool {
    q.is_integer() && q.is_positive()
}

fn orbit_matches(h_o: &Q, h_a: &Q, classes: Vec<Vec<Contribution>>, expected: &Q) -> bool {
    let (Some(h_o), Some(h_a)) = (q_to_u64(h_o), q_to_u64(h_a)) else {
        return false;
    };
    orbit_number(&OrbitInput { h_o, h_a, classes })
        .map(|r| q_int(r as i64) == *expected)
        .unwrap_or(false)
}

/// Evaluates every count for `p` and the identities tying them together.
/// Only a failure to obtain the quadratic inputs is an error; failed identities are
/// reported by name in `checks`.
pub fn identity_suite<S: QuadraticData + ?Sized>(p: u64, data: &S) -> Result<SurfaceCountRow> {
    let inp = Inputs::gather(p, data)?;
    let r = raw(&inp);
    let hf = inp.hf();
    let h_a = inp.h_a();
    let h_o1 = &hf * &r.t_o1;
    let h_o16 = match (&h_a, &r.t_o16) {
        (Some(a), Some(t)) => Some(a * t),
        _ => None,
    };
    let mut checks = Vec::new();
    checks.push(("T_positive_integer", is_positive_integer(&r.t)));
    let components_ok = is_positive_integer(&r.t_o1)
        && r.t_o8.iter().chain(r.t_o16.iter()).all(is_positive_integer);
    checks.push(("components_integral", components_ok));
    checks.push(("H_positive_integer", is_positive_integer(&r.h)));
    if p % 4 == 1 {
        checks.push(("component_sum", r.t == r.t_closed));
    }
    let varpi = inp.varpi();
    let exceptional = p > 5 && p % 8 == 5 && varpi == Some(1);
    if !exceptional {
        checks.push(("H_equals_hF_T", r.h == &hf * &r.t_closed));
    }
    if p % 4 == 1 {
        let t8 = r.t_o8.clone().expect("p = 1 mod 4");
        let h_o8 = r.h_o8.clone().expect("p = 1 mod 4");
        let h_o16 = h_o16.clone().expect("p = 1 mod 4");
        let a = h_a.clone().expect("p = 1 mod 4");
        checks.push(("H_decomposition", r.h == &h_o1 + &h_o8 + &h_o16));
        checks.push(("hO4_equals_hF_tO8", r.h_o4 == &hf * &t8));
        if p > 5 {
            let halves = inp.hk(1).is_integer() && inp.hk(3).is_integer();
            checks.push(("halving", halves));
        }
        checks.push(("orbit_free_O8", orbit_matches(&r.h_o4, &hf, Vec::new(), &t8)));
        checks.push((
            "orbit_free_O16",
            orbit_matches(&h_o16, &a, Vec::new(), r.t_o16.as_ref().expect("p = 1 mod 4")),
        ));
        if let Some(hb) = &r.h_b32 {
            let b32_ok = build_b32(p as i64, data).map(|b| q_int(b.h_b as i64) == *hb).unwrap_or(false);
            checks.push(("B32_class_number", b32_ok));
            let classes = match q_to_u64(hb) {
                Some(h_b) => (1..3).map(|_| alloc::vec![Contribution { delta: 0, h_b, m_prod: 1 }]).collect(),
                None => Vec::new(),
            };
            checks.push(("orbit_O8_capitulation", orbit_matches(&h_o8, &a, classes, &t8)));
        }
        if inp.h_f % 2 == 1 {
            let div = q_to_u64(&h_o8).map(|h| divisibility_checks(h, inp.h_f, 0, false).passed());
            checks.push(("divisibility_O8", div.unwrap_or(false)));
        }
    }
    checks.push(("orbit_free_O1", orbit_matches(&h_o1, &hf, Vec::new(), &r.t_o1)));
    let deuring_ok = match (deuring_h(p), deuring_t(p, data)) {
        (Ok(h), Ok(t)) => t <= h,
        _ => false,
    };
    checks.push(("deuring_t_le_h", deuring_ok));
    Ok(SurfaceCountRow {
        p,
        h: r.h,
        t: r.t,
        t_o1: r.t_o1,
        t_o8: r.t_o8,
        t_o16: r.t_o16,
        h_o1,
        h_o4: r.h_o4,
        h_o4_informational: r.h_o4_informational,
        h_o8: r.h_o8,
        h_o16,
        h_f: inp.h_f,
        h_a: inp.order.as_ref().map(|o| o.h_a),
        varpi,
        zeta: inp.zeta,
        checks,
    })
}

/// Formats an exact rational as an integer or `a/b`.
pub fn format_q(q: &Q) -> alloc::string::String {
    if q.is_integer() {
        alloc::format!("{}", q.to_integer())
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the output of [`format_q`].
pub fn parse_q(s: &str) -> Option<Q> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_core::Direct;

    #[test]
    fn deuring_values() {
        assert_eq!(deuring_h(11), Ok(2));
        assert_eq!(deuring_h(37), Ok(3));
        assert_eq!(deuring_h(2), Ok(1));
        assert_eq!(deuring_t(11, &Direct), Ok(2));
        assert_eq!(deuring_t(7, &Direct), Ok(1));
        assert_eq!(deuring_t(2, &Direct), Ok(1));
        assert_eq!(deuring_h(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn surface_counts() {
        let hs: Vec<u64> = [2, 3, 5, 7, 37].iter().map(|&p| class_number_h(p, &Direct).unwrap()).collect();
        assert_eq!(hs, [1, 2, 3, 3, 27]);
    }

    #[test]
    fn type_counts() {
        let t = |p| type_number_t(p, &Direct).unwrap();
        assert_eq!([t(2).total, t(3).total, t(5).total], [1, 2, 3]);
        assert_eq!(t(13), TypeCounts { total: 5, t_o1: 1, t_o8: Some(2), t_o16: Some(2) });
        assert_eq!(t(17), TypeCounts { total: 6, t_o1: 1, t_o8: Some(2), t_o16: Some(3) });
        assert_eq!(t(7).total, 3);
        assert_eq!(t(37), TypeCounts { total: 13, t_o1: 2, t_o8: Some(5), t_o16: Some(6) });
    }

    #[test]
    fn order_class_numbers() {
        assert_eq!(h_o4(5, &Direct).unwrap().value, 1);
        assert_eq!(h_o4(2, &Direct).unwrap().value, 1);
        assert_eq!(h_o4(3, &Direct).unwrap().value, 2);
        assert_eq!(h_o4(13, &Direct).unwrap().value, 2);
        assert!(h_o4(7, &Direct).unwrap().informational);
        assert_eq!(h_o8(37, &Direct), Ok(7));
        assert_eq!(h_o8(13, &Direct), Ok(2));
        assert_eq!(h_o8(17, &Direct), Ok(2));
    }

    #[test]
    fn suite_examples() {
        let row = identity_suite(37, &Direct).unwrap();
        assert!(row.passed(), "{:?}", row.checks);
        assert_eq!(row.h_o1, q_int(2));
        assert_eq!(row.h_o8, Some(q_int(7)));
        assert_eq!(row.h_o16, Some(q_int(18)));
        let row = identity_suite(13, &Direct).unwrap();
        assert!(row.passed());
        assert_eq!(row.h, q_int(5));
        let row = identity_suite(7, &Direct).unwrap();
        assert!(row.passed());
        assert!(row.checks.iter().all(|(n, _)| *n != "H_decomposition"));
        for p in [2, 3, 5] {
            assert!(identity_suite(p, &Direct).unwrap().passed(), "p = {p}");
        }
    }

    #[test]
    fn rational_formatting_round_trips() {
        for q in [q_frac(5, 6), q_int(-3), q_frac(-7, 12), q_int(0)] {
            assert_eq!(parse_q(&format_q(&q)), Some(q));
        }
        assert_eq!(format_q(&q_frac(4, 2)), "2");
        assert_eq!(parse_q("1/0"), None);
    }
}
