const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The Kronecker symbol `(a | n)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut b = n as i128;
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre_euler(a: i64, p: i64) -> i8 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        let mut acc = 1i64;
        let mut base = r;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn worked_values() {
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-4, 11), -1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-8, 2), 0);
    }

    #[test]
    fn agrees_with_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 101, 1009] {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), legendre_euler(a, p), "a={a} p={p}");
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_in_top(a in -500i64..500, b in -500i64..500, n in 1i64..400) {
            prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        }

        #[test]
        fn multiplicative_in_bottom(a in -300i64..300, m in 1i64..300, n in 1i64..300) {
            prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
        }

        #[test]
        fn periodic_for_discriminants(m in -200i64..200, a in 1i64..500) {
            prop_assume!(m != 0 && m != 1 && crate::arith::is_squarefree(m));
            let d = crate::arith::field_disc(m);
            prop_assert_eq!(kronecker(d, a), kronecker(d, a + d.abs()));
        }
    }
}
