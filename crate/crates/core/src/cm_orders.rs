//! CM extensions `K = F(sqrt(-m))` of real quadratic fields `F = Q(sqrt(d))`,
//! their `O_F`-orders, and the capitulation data attached to them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{factorize, field_disc, q_int, squarefree_part, v2};
use crate::error::{Error, Result};
use crate::ideal_lattices::{ramified_prime, PrincipalMode, QuadLattice, QuadOrder};
use crate::quadratic_core::{kronecker, Disc, QuadraticData};

/// How a rational prime behaves in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behaviour {
    Split,
    Inert,
    Ramified,
}

pub fn behaviour(disc: i64, ell: u64) -> Behaviour {
    match kronecker(disc, ell as i64) {
        1 => Behaviour::Split,
        -1 => Behaviour::Inert,
        _ => Behaviour::Ramified,
    }
}

/// A prime of `O_F` above 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DyadicPrime {
    /// Distinguishes the two primes when 2 splits.
    pub index: u8,
    pub norm: u64,
    /// `nu_p(2)`.
    pub ram_index: u32,
}

/// The dyadic primes of `Q(sqrt(d))`, read off `d mod 8`.
pub fn dyadic_primes(d: i64) -> Result<Vec<DyadicPrime>> {
    let disc = Disc::new(d)?;
    Ok(match behaviour(disc.disc(), 2) {
        Behaviour::Split => vec![
            DyadicPrime { index: 0, norm: 2, ram_index: 1 },
            DyadicPrime { index: 1, norm: 2, ram_index: 1 },
        ],
        Behaviour::Inert => vec![DyadicPrime { index: 0, norm: 4, ram_index: 1 }],
        Behaviour::Ramified => vec![DyadicPrime { index: 0, norm: 2, ram_index: 2 }],
    })
}

/// `K = F(sqrt(-m))` with `F = Q(sqrt(d))`, `d > 1`. The radicand is normalized to the
/// smaller of the two squarefree choices so equal fields compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmField {
    d: i64,
    m: i64,
}

impl CmField {
    pub fn new(d: i64, m: i64) -> Result<Self> {
        let f = Disc::new(d)?;
        if !f.is_real() {
            return Err(Error::OutOfDomain { what: "real radicand", value: d });
        }
        if m <= 0 {
            return Err(Error::OutOfDomain { what: "positive radicand", value: m });
        }
        let m = squarefree_part(m);
        let other = squarefree_part(m * d);
        Ok(CmField { d, m: m.min(other) })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn is_f_sqrt_minus1(&self) -> bool {
        self.m == 1
    }

    /// The two imaginary quadratic subfields, as negative radicands.
    pub fn imaginary_subfields(&self) -> [i64; 2] {
        [-self.m, -squarefree_part(self.m * self.d)]
    }

    /// Fundamental discriminants of the three quadratic subfields, `F` first.
    pub fn quadratic_discs(&self) -> [i64; 3] {
        let [a, b] = self.imaginary_subfields();
        [field_disc(self.d), field_disc(a), field_disc(b)]
    }

    pub fn contains_sqrt_minus3(&self) -> bool {
        self.imaginary_subfields().contains(&-3)
    }

    /// Order of the group of roots of unity.
    pub fn roots_of_unity(&self) -> u64 {
        match (self.d, self.m) {
            (2, 1) => 8,
            (3, 1) => 12,
            _ if self.m == 1 => 4,
            _ if self.contains_sqrt_minus3() => 6,
            _ => 2,
        }
    }

    pub fn label(&self) -> String {
        format!("Q(sqrt({}), sqrt(-{}))", self.d, self.m)
    }

    /// `nu_p` of the relative discriminant at a dyadic prime.
    pub fn relative_disc_valuation(&self, p: &DyadicPrime) -> u32 {
        let [df, d1, d2] = self.quadratic_discs();
        let v = v2(d1) + v2(d2) - v2(df);
        match p.ram_index {
            2 => v,
            _ => v / 2,
        }
    }

    /// `nu_p` of the fractional ideal of imaginary parts of `O_K` relative to `sqrt(-m)`.
    fn imaginary_part_valuation(&self, p: &DyadicPrime) -> i64 {
        let e = p.ram_index as i64;
        let disc_v = self.relative_disc_valuation(p) as i64;
        let four_m = e * (2 + v2(self.m) as i64);
        debug_assert!((disc_v - four_m) % 2 == 0);
        (disc_v - four_m) / 2
    }
}

fn roots_of_unity_imag(radicand: i64) -> u64 {
    match radicand {
        -1 => 4,
        -3 => 6,
        _ => 2,
    }
}

/// Artin symbol of `K/F` at the primes of `F` above the rational prime `ell`:
/// 1 split, -1 inert, 0 ramified.
pub fn artin_symbol(field: &CmField, ell: u64) -> i8 {
    let discs = field.quadratic_discs();
    let chis: Vec<i8> = discs.iter().map(|&d| kronecker(d, ell as i64)).collect();
    // In the Klein four group Gal(K/Q), the inertia and decomposition groups at `ell`
    // are determined by which quadratic subfields are unramified or split.
    let unramified: Vec<usize> = (0..3).filter(|&i| chis[i] != 0).collect();
    let inertia_meets_hf = match unramified.len() {
        3 => false,
        1 => unramified[0] == 0,
        _ => true,
    };
    if inertia_meets_hf {
        return 0;
    }
    let split: Vec<usize> = (0..3).filter(|&i| chis[i] == 1).collect();
    let decomposition_meets_hf = match split.len() {
        3 => false,
        1 => split[0] == 0,
        _ => true,
    };
    if decomposition_meets_hf {
        -1
    } else {
        1
    }
}

/// Number of optimal embeddings of `O_K` into a local Eichler order of prime level, `1 + (K/p)`.
pub fn local_embedding_number(field: &CmField, ell: u64) -> u32 {
    (1 + artin_symbol(field, ell) as i32) as u32
}

/// One prime-power factor `p^k` of a conductor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConductorFactor {
    pub norm: u64,
    pub exponent: u32,
    pub symbol: i8,
}

/// `h(B) = h(K) N(f) prod (1 - (K/p)/N(p)) / [O_K^x : B^x]`.
pub fn h_order_eq4(h_k: u64, conductor: &[ConductorFactor], unit_index: u64) -> Result<u64> {
    if unit_index == 0 {
        return Err(Error::OutOfDomain { what: "unit index", value: 0 });
    }
    let mut value = q_int(h_k as i64);
    for f in conductor.iter().filter(|f| f.exponent > 0) {
        let n = f.norm as i64;
        value *= q_int(n.pow(f.exponent - 1) * (n - f.symbol as i64));
    }
    value /= q_int(unit_index as i64);
    crate::arith::q_to_u64(&value)
        .filter(|&v| v > 0)
        .ok_or(Error::NonIntegral { what: "order class number", value })
}

/// `h(Q(sqrt(p), sqrt(-j p)))` for `j in {1, 3}` as `h(F) h(-j p) / 2`.
pub fn hk_biquadratic<S: QuadraticData + ?Sized>(p: u64, j: u8, data: &S) -> Result<u64> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if j != 1 && j != 3 {
        return Err(Error::OutOfDomain { what: "j", value: j as i64 });
    }
    let h_f = data.class_number(p as i64)?;
    let h_im = data.class_number(-(j as i64) * p as i64)?;
    let prod = h_f * h_im;
    if prod % 2 != 0 {
        return Err(Error::HalvingFailure { p, j });
    }
    Ok(prod / 2)
}

/// Hasse unit index `[O_K^x : mu_K O_F^x]`, either 1 or 2.
pub fn hasse_unit_index<S: QuadraticData + ?Sized>(field: &CmField, data: &S) -> Result<u8> {
    let unit = data.fundamental_unit(field.d)?;
    if unit.norm < 0 {
        return Ok(1);
    }
    // eps = (1 + eps)^2 / s with s = Tr(eps) + 2 rational.
    let s = unit.trace() + BigInt::from(2);
    let is_f_square = |r: &BigInt| is_square(r) || (r % field.d == BigInt::zero() && is_square(&(r / field.d)));
    if is_f_square(&(&s * field.m)) {
        return Ok(2);
    }
    if field.is_f_sqrt_minus1() && is_f_square(&(&s * 2)) {
        return Ok(2);
    }
    Ok(1)
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// `h(K) = Q w_K h(F) h(k_1) h(k_2) / (w_1 w_2)` for the biquadratic CM field `K`.
pub fn class_number_cm<S: QuadraticData + ?Sized>(field: &CmField, data: &S) -> Result<u64> {
    let q = hasse_unit_index(field, data)? as u64;
    let h_f = data.class_number(field.d)?;
    let [a, b] = field.imaginary_subfields();
    let num = q * field.roots_of_unity() * h_f * data.class_number(a)? * data.class_number(b)?;
    let den = roots_of_unity_imag(a) * roots_of_unity_imag(b);
    if !num.is_multiple_of(den) {
        return Err(Error::NonIntegral {
            what: "biquadratic class number",
            value: BigRational::new(BigInt::from(num), BigInt::from(den)),
        });
    }
    Ok(num / den)
}

/// A CM order together with the data entering the fixed-point count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmOrderDesc {
    pub field: CmField,
    pub conductor: Vec<(DyadicPrime, u32)>,
    pub delta: u8,
    pub unit_index: u64,
    pub h_b: u64,
    /// Local optimal embedding number at 2, when it is pinned down.
    pub m2: Option<u32>,
}

/// `B_{3,2} = A + 2 O_K` in `K = F(sqrt(-3))` for `d = 5 mod 8`.
pub fn build_b32<S: QuadraticData + ?Sized>(d: i64, data: &S) -> Result<CmOrderDesc> {
    if d < 5 || d.rem_euclid(8) != 5 {
        return Err(Error::OutOfDomain { what: "radicand 5 mod 8", value: d });
    }
    Disc::new(d)?;
    let field = CmField::new(d, 3)?;
    let h_k = class_number_cm(&field, data)?;
    let two = dyadic_primes(d)?[0];
    let factor = ConductorFactor { norm: two.norm, exponent: 1, symbol: artin_symbol(&field, 2) };
    let h_b = h_order_eq4(h_k, &[factor], 3)?;
    Ok(CmOrderDesc { field, conductor: vec![(two, 1)], delta: 0, unit_index: 3, h_b, m2: Some(1) })
}

/// A product of distinct ramified primes of `O_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedProduct {
    /// The rational primes below the factors.
    pub primes: Vec<u64>,
    pub ideal: QuadLattice,
}

impl RamifiedProduct {
    /// The positive rational generating the square of the ideal.
    pub fn square_generator(&self) -> u64 {
        self.primes.iter().product()
    }
}

/// The image `C_2(F)` of `Pic^+(O_F)[2]` in `Pic(O_F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C2Group {
    pub d: i64,
    pub order: u64,
    /// Minimal generating set of ramified primes, by rational prime.
    pub generators: Vec<u64>,
    /// One ramified-product representative per nontrivial class.
    pub nontrivial: Vec<RamifiedProduct>,
}

fn ramified_product(d: i64, primes: &[u64], mask: u32) -> Result<RamifiedProduct> {
    let order = QuadOrder::maximal(d)?;
    let mut ideal = QuadLattice::unit(order);
    let mut chosen = Vec::new();
    for (i, &q) in primes.iter().enumerate() {
        if mask >> i & 1 == 1 {
            ideal = ideal.mul(&ramified_prime(d, q)?)?;
            chosen.push(q);
        }
    }
    Ok(RamifiedProduct { primes: chosen, ideal })
}

pub fn c2_group(d: i64) -> Result<C2Group> {
    let disc = Disc::new(d)?;
    if !disc.is_real() {
        return Err(Error::OutOfDomain { what: "real radicand", value: d });
    }
    let primes: Vec<u64> = factorize(disc.disc() as u64).into_iter().map(|(q, _)| q).collect();
    let t = primes.len() as u32;
    let mut kernel = Vec::new();
    for mask in 0..1u32 << t {
        let prod = ramified_product(d, &primes, mask)?;
        if prod.ideal.is_principal(PrincipalMode::Wide)?.principal {
            kernel.push(mask);
        }
    }
    let order = (1u64 << t) / kernel.len() as u64;
    let mut seen: Vec<u32> = kernel.clone();
    let mut nontrivial = Vec::new();
    for mask in 0..1u32 << t {
        if seen.contains(&mask) {
            continue;
        }
        for &k in &kernel {
            seen.push(mask ^ k);
        }
        nontrivial.push(ramified_product(d, &primes, mask)?);
    }
    let mut span = kernel.clone();
    let mut generators = Vec::new();
    for (i, &q) in primes.iter().enumerate() {
        let bit = 1u32 << i;
        if span.contains(&bit) {
            continue;
        }
        generators.push(q);
        let shifted: Vec<u32> = span.iter().map(|s| s ^ bit).collect();
        span.extend(shifted);
    }
    Ok(C2Group { d, order, generators, nontrivial })
}

/// Dyadic primes of `F` unramified in `K`.
pub fn f_diamond(field: &CmField) -> Vec<DyadicPrime> {
    dyadic_primes(field.d)
        .expect("field radicand already validated")
        .into_iter()
        .filter(|_| artin_symbol(field, 2) != 0)
        .collect()
}

/// `2^omega(f_diamond)`, the number of orders between `O_F + f_diamond O_K` and `O_K`.
pub fn count_odd_orders(field: &CmField) -> u64 {
    1 << f_diamond(field).len()
}

/// Conductor of `B_0 = O_F + (purely imaginary part of O_K)` at every dyadic prime.
pub fn b0_conductor(field: &CmField) -> Result<Vec<(DyadicPrime, u32)>> {
    if field.d == 2 && field.m == 1 {
        return Err(Error::Unevaluable(String::from("Q(zeta_8) has eta = zeta_8")));
    }
    let mut out = Vec::new();
    for p in dyadic_primes(field.d)? {
        let e = p.ram_index as i64;
        let imag = field.imaginary_part_valuation(&p);
        let v = if field.is_f_sqrt_minus1() {
            // purely "eta-imaginary" part: beta (1 - i) with 2 beta^2 integral
            e - e / 2 - field.relative_disc_valuation(&p) as i64 / 2
        } else {
            let j = -(e * v2(field.m) as i64).div_euclid(2);
            j - imag
        };
        if v < 0 {
            return Err(Error::Unevaluable(format!("negative conductor valuation for {}", field.label())));
        }
        out.push((p, v as u32));
    }
    Ok(out)
}

/// `nu_p(f_0)` at a dyadic prime unramified in `K`.
pub fn b0_conductor_valuation(field: &CmField, p: &DyadicPrime) -> Result<u32> {
    if artin_symbol(field, 2) == 0 {
        return Err(Error::OutOfDomain { what: "dyadic prime ramified in K", value: p.index as i64 });
    }
    if field.is_f_sqrt_minus1() {
        if field.d == 2 {
            return Err(Error::Unevaluable(String::from("Q(zeta_8) has eta = zeta_8")));
        }
        // (1/2) nu_p(N(1 - i)) = (1/2) nu_p(2)
        if !p.ram_index.is_multiple_of(2) {
            return Err(Error::NonIntegral { what: "conductor valuation", value: BigRational::new(1.into(), 2.into()) });
        }
        return Ok(p.ram_index / 2);
    }
    Ok(p.ram_index)
}

/// `[O_K^x : B^x]` for `B = O_F + f O_K`, assuming `O_K^x = mu_K O_F^x`.
pub fn unit_index(field: &CmField, conductor: &[(DyadicPrime, u32)]) -> u64 {
    // z = a + b sqrt(-m) lies in B iff nu_p(b) >= nu_p(f) + nu_p(imaginary parts) at every p | f.
    let holds = |beta_valuation: &dyn Fn(&DyadicPrime) -> i64| {
        conductor
            .iter()
            .filter(|(_, k)| *k > 0)
            .all(|(p, k)| beta_valuation(p) >= *k as i64 + field.imaginary_part_valuation(p))
    };
    let w = field.roots_of_unity();
    let mut kept = 2u64;
    if w.is_multiple_of(4) {
        if w == 8 && holds(&|_| -1) {
            kept *= 4;
        } else if holds(&|_| 0) {
            kept *= 2;
        }
    }
    if w.is_multiple_of(3) {
        let m = field.m;
        if holds(&|p| -(p.ram_index as i64 * v2(m) as i64) / 2 - p.ram_index as i64) {
            kept *= 3;
        }
    }
    w / kept
}

/// Where a capitulating CM field came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateSource {
    /// `F(sqrt(-r))` where `a^2 = r O_F` for the ramified product `a`.
    Rational { primes: Vec<u64> },
    /// `F(sqrt(-r eps))`, rewritten through `eps = (1 + eps)^2 / (Tr eps + 2)`.
    TimesUnit { primes: Vec<u64> },
    /// `F(sqrt(-1))`, capitulating the class of the ramified dyadic prime.
    SqrtMinusOne,
}

/// A capitulating CM field with the orders between `B_0` and `O_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptBEntry {
    pub field: CmField,
    pub sources: Vec<CandidateSource>,
    pub h_k: u64,
    pub f0: Vec<(DyadicPrime, u32)>,
    pub orders: Vec<CmOrderDesc>,
}

fn square_class_of_unit_shift(d: i64, primes: &[u64], s: &BigInt) -> Result<i64> {
    // s = N(1 + eps) is a product of ramified primes times a square.
    let mut rest = s.clone();
    let mut core = 1i64;
    for &q in primes {
        let mut v = 0;
        while (&rest % q).is_zero() {
            rest /= q;
            v += 1;
        }
        if v % 2 == 1 {
            core *= q as i64;
        }
    }
    if !is_square(&rest) {
        return Err(Error::Unevaluable(format!("Tr(eps) + 2 is not a ramified square class for d = {d}")));
    }
    Ok(core)
}

/// The capitulating biquadratic CM fields over `Q(sqrt(d))` and their admissible orders.
pub fn script_b<S: QuadraticData + ?Sized>(d: i64, data: &S) -> Result<Vec<ScriptBEntry>> {
    let c2 = c2_group(d)?;
    let mut fields: BTreeMap<CmField, Vec<CandidateSource>> = BTreeMap::new();
    if c2.order == 1 {
        return Ok(Vec::new());
    }
    let unit = data.fundamental_unit(d)?;
    let disc = field_disc(d);
    let ramified: Vec<u64> = factorize(disc as u64).into_iter().map(|(q, _)| q).collect();
    for class in &c2.nontrivial {
        let r = class.square_generator() as i64;
        fields
            .entry(CmField::new(d, r)?)
            .or_default()
            .push(CandidateSource::Rational { primes: class.primes.clone() });
        if unit.norm > 0 {
            let s = unit.trace() + BigInt::from(2);
            let core = square_class_of_unit_shift(d, &ramified, &s)?;
            fields
                .entry(CmField::new(d, squarefree_part(r * core))?)
                .or_default()
                .push(CandidateSource::TimesUnit { primes: class.primes.clone() });
        }
    }
    if disc % 2 == 0 && d != 2 {
        let p2 = ramified_prime(d, 2)?;
        if !p2.is_principal(PrincipalMode::Wide)?.principal {
            fields.entry(CmField::new(d, 1)?).or_default().push(CandidateSource::SqrtMinusOne);
        }
    }
    let mut out = Vec::new();
    for (field, sources) in fields {
        if hasse_unit_index(&field, data)? != 1 {
            return Err(Error::Unevaluable(format!("{} has unit index 2", field.label())));
        }
        let h_k = class_number_cm(&field, data)?;
        let f0 = b0_conductor(&field)?;
        let symbol = artin_symbol(&field, 2);
        let mut orders = Vec::new();
        for exps in divisor_exponents(&f0) {
            let factors: Vec<ConductorFactor> = exps
                .iter()
                .map(|(p, k)| ConductorFactor { norm: p.norm, exponent: *k, symbol })
                .collect();
            let ui = unit_index(&field, &exps);
            let h_b = h_order_eq4(h_k, &factors, ui)?;
            orders.push(CmOrderDesc { field, conductor: exps, delta: 0, unit_index: ui, h_b, m2: None });
        }
        out.push(ScriptBEntry { field, sources, h_k, f0, orders });
    }
    Ok(out)
}

fn divisor_exponents(f: &[(DyadicPrime, u32)]) -> Vec<Vec<(DyadicPrime, u32)>> {
    let mut acc: Vec<Vec<(DyadicPrime, u32)>> = vec![Vec::new()];
    for &(p, k) in f {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                (0..=k).map(move |j| {
                    let mut v = prefix.clone();
                    v.push((p, j));
                    v
                })
            })
            .collect();
    }
    acc
}

/// Outcome of the parity check on `{B : h(B)/h(F) odd}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityReport {
    pub d: i64,
    pub h_f: u64,
    pub orders: usize,
    pub b_odd: usize,
    /// `sum 2^omega(f_diamond)` over the fields with odd `h(K)/h(F)`.
    pub predicted: usize,
}

impl ParityReport {
    pub fn is_even(&self) -> bool {
        self.b_odd.is_multiple_of(2)
    }
}

pub fn b_odd_parity_check<S: QuadraticData + ?Sized>(d: i64, data: &S) -> Result<ParityReport> {
    let h_f = data.class_number(d)?;
    let entries = script_b(d, data)?;
    let mut b_odd = 0;
    let mut orders = 0;
    let mut predicted = 0;
    for e in &entries {
        for o in &e.orders {
            orders += 1;
            if o.h_b % h_f != 0 {
                return Err(Error::NonIntegral {
                    what: "relative order class number",
                    value: BigRational::new(BigInt::from(o.h_b), BigInt::from(h_f)),
                });
            }
            if (o.h_b / h_f) % 2 == 1 {
                b_odd += 1;
            }
        }
        if (e.h_k / h_f) % 2 == 1 {
            predicted += count_odd_orders(&e.field) as usize;
        }
    }
    Ok(ParityReport { d, h_f, orders, b_odd, predicted })
}
