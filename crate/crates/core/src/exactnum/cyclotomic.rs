use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Returns the m-th cyclotomic polynomial as integer coefficients, lowest
/// degree first. The leading coefficient is 1.
///
/// Computed as `(x^m - 1) / prod_{d | m, d < m} Phi_d(x)` and cached per order.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_exact_monic(&num, &cyclotomic_poly(d));
        }
    }
    let poly = Arc::new(num);
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for t in (dd..rem.len()).rev() {
        let c = rem[t];
        if c == 0 {
            continue;
        }
        quot[t - dd] = c;
        for (i, &dc) in den.iter().enumerate() {
            rem[t - dd + i] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// An element of the ring of cyclotomic integers `Z[zeta_m]`.
///
/// Stored as the remainder of a polynomial in `zeta_m` after division by
/// `Phi_m`; the vector always has length `deg Phi_m = phi(m)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycInt {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    fn degree_of(order: u32) -> usize {
        cyclotomic_poly(order).len() - 1
    }

    /// Reduces an arbitrary polynomial in `zeta_m` to canonical form.
    pub fn from_poly(order: u32, mut poly: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        for t in (deg..poly.len()).rev() {
            if poly[t].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[t]);
            for (i, &pc) in phi.iter().enumerate().take(deg) {
                if pc != 0 {
                    poly[t - deg + i] -= &c * pc;
                }
            }
        }
        poly.resize(deg, BigInt::zero());
        CycInt {
            order,
            coeffs: poly,
        }
    }

    pub fn zero(order: u32) -> Self {
        CycInt {
            order,
            coeffs: vec![BigInt::zero(); Self::degree_of(order)],
        }
    }

    pub fn from_int(order: u32, k: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = k.into();
        z
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    /// `zeta_m^e`.
    pub fn zeta_pow(order: u32, e: u64) -> Self {
        let e = (e % order as u64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        Self::from_poly(order, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &CycInt) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_order(other)?;
        Ok(CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check_order(other)?;
        Ok(CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_order(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.order, prod))
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex conjugate, the automorphism `zeta_m -> zeta_m^{-1}`.
    pub fn conj(&self) -> CycInt {
        let m = self.order as usize;
        let mut poly = vec![BigInt::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(m - k) % m] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// Equal to its own conjugate, i.e. a real number.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `e * conj(e) == 1`. For cyclotomic integers this holds exactly for
    /// the roots of unity of `Q(zeta_m)`.
    pub fn is_unit_modulus(&self) -> bool {
        let n = self * &self.conj();
        n.as_integer().is_some_and(One::is_one)
    }

    /// Renders as `a0+a1*z+a2*z^2+...` with zero terms omitted.
    pub fn to_poly_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                        out.push('*');
                    }
                    out.push('z');
                    if k > 1 {
                        out.push('^');
                        out.push_str(&k.to_string());
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the output of [`CycInt::to_poly_string`] (or any sum of terms
    /// `c`, `c*z`, `c*z^k`, `z^k`) and reduces it modulo `Phi_m`.
    pub fn parse_poly(order: u32, s: &str) -> Result<CycInt> {
        let bad = || Error::Parse(format!("malformed cyclotomic literal {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut poly: Vec<BigInt> = Vec::new();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            let (coef, power) = match body.find('z') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
                Some(zpos) => {
                    let coef = match &body[..zpos] {
                        "" => BigInt::one(),
                        c => c
                            .strip_suffix('*')
                            .ok_or_else(bad)?
                            .parse::<BigInt>()
                            .map_err(|_| bad())?,
                    };
                    let power = match &body[zpos + 1..] {
                        "" => 1,
                        p => p
                            .strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?,
                    };
                    (coef, power)
                }
            };
            if poly.len() <= power {
                poly.resize(power + 1, BigInt::zero());
            }
            poly[power] += coef * sign;
        }
        Ok(Self::from_poly(order, poly))
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

// Operator forms panic on order mismatch; use the checked_* methods when
// orders come from untrusted input.
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// A formal sum `sum_k counts[k] * zeta_m^k` in the group ring of the
/// cyclic group of order m. Multiplying by a root of unity is a rotation,
/// so character sums accumulate here and reduce to a [`CycInt`] once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    order: u32,
    counts: Vec<BigInt>,
}

impl RootSum {
    pub fn new(order: u32) -> Self {
        RootSum {
            order,
            counts: vec![BigInt::zero(); order as usize],
        }
    }

    pub fn from_counts(order: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), order as usize);
        RootSum {
            order,
            counts: counts.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn unit(order: u32) -> Self {
        let mut s = Self::new(order);
        s.counts[0] = BigInt::one();
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(Zero::is_zero)
    }

    /// Adds `c * zeta^e`.
    pub fn add_power(&mut self, e: u32, c: &BigInt) {
        self.counts[(e % self.order) as usize] += c;
    }

    /// Adds `zeta^e * other`.
    pub fn add_rotated(&mut self, other: &RootSum, e: u32) {
        let m = self.order as usize;
        let e = (e % self.order) as usize;
        for (k, c) in other.counts.iter().enumerate() {
            if !c.is_zero() {
                self.counts[(k + e) % m] += c;
            }
        }
    }

    pub fn to_cyc(&self) -> CycInt {
        CycInt::from_poly(self.order, self.counts.clone())
    }
}

/// Identifies roots of unity in `Z[zeta_m]` by exact lookup.
///
/// The roots of unity of `Q(zeta_m)` are the `M`-th roots with
/// `M = lcm(2, m)`; each one is returned as its exponent `k` in
/// `zeta_M^k`.
pub struct RootTable {
    order: u32,
    big_order: u32,
    lookup: HashMap<Vec<BigInt>, u32>,
}

impl RootTable {
    pub fn new(order: u32) -> Self {
        let big_order = order.lcm(&2);
        let mut lookup = HashMap::new();
        for k in 0..order {
            let z = CycInt::zeta_pow(order, k as u64);
            // zeta_m^k = zeta_M^{k * M / m}
            let e_pos = (k as u64 * (big_order / order) as u64 % big_order as u64) as u32;
            // -1 = zeta_M^{M/2}
            let e_neg = (e_pos + big_order / 2) % big_order;
            lookup.entry(z.coeffs.clone()).or_insert(e_pos);
            lookup.entry((-&z).coeffs).or_insert(e_neg);
        }
        RootTable {
            order,
            big_order,
            lookup,
        }
    }

    /// The order `M` exponents refer to.
    pub fn big_order(&self) -> u32 {
        self.big_order
    }

    pub fn exponent(&self, value: &CycInt) -> Option<u32> {
        if value.order != self.order {
            return None;
        }
        self.lookup.get(&value.coeffs).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polys_known() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = CycInt::zeta_pow(4, 1);
        let sq = &z * &z;
        assert_eq!(sq.coeffs(), &ints(&[-1, 0])[..]);
        assert_eq!(sq.as_integer(), Some(&BigInt::from(-1)));
    }

    #[test]
    fn zeta3_plus_square_is_minus_one() {
        let s = &CycInt::zeta_pow(3, 1) + &CycInt::zeta_pow(3, 2);
        assert_eq!(s, CycInt::from_int(3, -1));
    }

    #[test]
    fn full_orbit_sums_vanish_for_primes() {
        for m in [2u32, 3, 5, 7, 11, 13] {
            let s = (0..m).fold(CycInt::zero(m), |acc, k| {
                &acc + &CycInt::zeta_pow(m, k as u64)
            });
            assert!(s.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn order_mismatch_is_reported() {
        let a = CycInt::one(3);
        let b = CycInt::one(4);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn conjugation_and_unit_modulus() {
        let z = CycInt::zeta_pow(5, 2);
        assert_eq!(z.conj(), CycInt::zeta_pow(5, 3));
        assert!(z.is_unit_modulus());
        assert!(!CycInt::from_int(5, 2).is_unit_modulus());
        let golden = -&(&CycInt::zeta_pow(5, 1) + &CycInt::zeta_pow(5, 4));
        assert!(golden.is_real());
        assert!(!golden.is_unit_modulus());
    }

    #[test]
    fn poly_string_round_trip() {
        let cases = [(3, "0"), (3, "z"), (3, "-1-z"), (4, "-1"), (5, "2-3*z+z^3")];
        for (m, s) in cases {
            let v = CycInt::parse_poly(m, s).unwrap();
            assert_eq!(v.to_poly_string(), s);
        }
        // unreduced input is reduced
        assert_eq!(
            CycInt::parse_poly(3, "z^2").unwrap(),
            CycInt::parse_poly(3, "-1-z").unwrap()
        );
        assert!(CycInt::parse_poly(3, "2*").is_err());
        assert!(CycInt::parse_poly(3, "").is_err());
    }

    #[test]
    fn root_table_finds_all_roots() {
        for m in [1u32, 2, 3, 4, 5, 6, 8] {
            let t = RootTable::new(m);
            let big = t.big_order();
            assert_eq!(t.lookup.len(), big as usize);
            for k in 0..m {
                let z = CycInt::zeta_pow(m, k as u64);
                let e = t.exponent(&z).unwrap();
                assert_eq!(e, k * (big / m));
                assert!(t.exponent(&(-&z)).is_some());
            }
            assert!(t.exponent(&CycInt::from_int(m, 2)).is_none());
        }
    }

    fn arb_cyc(m: u32) -> impl Strategy<Value = CycInt> {
        let d = CycInt::degree_of(m);
        proptest::collection::vec(-20i64..=20, d).prop_map(move |v| CycInt::from_poly(m, ints(&v)))
    }

    fn arb_triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
        prop_oneof![Just(2u32), Just(3), Just(4), Just(5), Just(8)]
            .prop_flat_map(|m| (arb_cyc(m), arb_cyc(m), arb_cyc(m)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn root_sum_matches_direct_sum(m in 1u32..=12, counts in proptest::collection::vec(-5i64..=5, 12)) {
            let rs = RootSum::from_counts(m, &counts[..m as usize]);
            let direct = (0..m).fold(CycInt::zero(m), |acc, k| {
                &acc + &CycInt::zeta_pow(m, k as u64).scale(&BigInt::from(counts[k as usize]))
            });
            prop_assert_eq!(rs.to_cyc(), direct);
        }
    }
}
