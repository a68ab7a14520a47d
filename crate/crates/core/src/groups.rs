//! Finite abelian alphabets, their characters, and the weight and
//! composition shells of `G^n`.
//!
//! Elements of a group of order `q` are always the indices `0..q`. For a
//! cyclic group that is the residue itself; for a field `F_{p^k}` the index
//! is the base-`p` number whose digits are the polynomial coefficients,
//! lowest degree as the least significant digit. Index 0 is the zero
//! element in both cases, and for fields index 1 is the multiplicative one.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{binom, multinom, pow_int, CycInt, ExactInt};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic,
    /// `F_{p^k}` as `Z_p[x] / (modulus)`; `modulus` is monic of degree `k`,
    /// coefficients lowest degree first (length `k + 1`).
    Field {
        p: u32,
        k: u32,
        modulus: Vec<u32>,
    },
}

/// A finite abelian group `Z_q` or `(F_{p^k}, +)` with precomputed
/// addition and character tables.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    kind: GroupKind,
    order: u32,
    root_order: u32,
    add: Vec<u32>,
    neg: Vec<u32>,
    // char_exp[g * q + h] = e with phi_g(h) = zeta_{root_order}^e
    char_exp: Vec<u32>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.kind == other.kind
    }
}

impl Eq for GroupSpec {}

/// An element of a [`GroupSpec`], identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(pub u32);

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Polynomials over Z_p, lowest degree first, no trailing-zero normalization.
fn poly_rem(mut a: Vec<u32>, modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let lead_inv = inv_mod(modulus[k], p);
    while a.len() > k {
        let top = a.pop().unwrap();
        if top == 0 {
            continue;
        }
        let c = (top as u64 * lead_inv as u64 % p as u64) as u32;
        let base = a.len() - k;
        for (i, &m) in modulus.iter().enumerate().take(k) {
            let sub = (c as u64 * m as u64 % p as u64) as u32;
            a[base + i] = (a[base + i] + p - sub) % p;
        }
    }
    a.resize(k, 0);
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|&x| (a as u64 * x as u64) % p as u64 == 1)
        .unwrap_or(0)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    out.into_iter().map(|c| (c % p as u64) as u32).collect()
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Whether the monic polynomial `f` (degree `k >= 1`) is irreducible over `Z_p`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 || f[k] != 1 {
        return false;
    }
    // trial division by every monic polynomial of degree 1..=k/2
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_is_zero(&poly_rem(f.to_vec(), &g, p)) {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % base as u64) as u32);
        idx /= base as u64;
    }
    out
}

fn undigits(ds: &[u32], base: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `k` over `Z_p`, comparing coefficients from the constant term upward.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    (0..count)
        .map(|idx| {
            // constant term is the most significant digit of the search order
            let mut f: Vec<u32> = digits(idx, p, k).into_iter().rev().collect();
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl GroupSpec {
    /// The cyclic group `Z_q`.
    pub fn cyclic(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain(format!("cyclic group needs q >= 2, got {q}")));
        }
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut char_exp = vec![0; n * n];
        for g in 0..q {
            for h in 0..q {
                add[(g * q + h) as usize] = (g + h) % q;
                char_exp[(g * q + h) as usize] = ((g as u64 * h as u64) % q as u64) as u32;
            }
        }
        let neg = (0..q).map(|g| (q - g) % q).collect();
        Ok(GroupSpec {
            kind: GroupKind::Cyclic,
            order: q,
            root_order: q,
            add,
            neg,
            char_exp,
        })
    }

    /// `F_{p^k}` with the default modulus.
    pub fn field(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::Domain(format!("F_{{{p}^{k}}} is not a field")));
        }
        Self::field_with_modulus(p, k, default_modulus(p, k))
    }

    /// `F_q` for a prime power `q`, default modulus.
    pub fn field_of_order(q: u32) -> Result<Self> {
        let (p, k) =
            prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        Self::field(p, k)
    }

    /// `F_{p^k}` as `Z_p[x] / (modulus)`; `modulus` lists coefficients from
    /// the constant term up and must be monic irreducible of degree `k`.
    pub fn field_with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::Domain(format!("F_{{{p}^{k}}} is not a field")));
        }
        if modulus.len() != k as usize + 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Domain(format!(
                "modulus {modulus:?} is not a degree-{k} polynomial over Z_{p}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Domain(format!(
                "modulus {modulus:?} is not monic irreducible over Z_{p}"
            )));
        }
        let q = p.pow(k);
        let n = q as usize;
        let elems: Vec<Vec<u32>> = (0..q as u64).map(|i| digits(i, p, k as usize)).collect();
        let mut add = vec![0; n * n];
        let mut char_exp = vec![0; n * n];
        let trace = |a: &[u32]| -> u32 {
            // Tr(a) = a + a^p + ... + a^{p^{k-1}}
            let mut sum = vec![0u32; k as usize];
            let mut frob = a.to_vec();
            for _ in 0..k {
                for (s, f) in sum.iter_mut().zip(&frob) {
                    *s = (*s + f) % p;
                }
                let mut pw = vec![1u32];
                for _ in 0..p {
                    pw = poly_rem(poly_mul(&pw, &frob, p), &modulus, p);
                }
                frob = pw;
            }
            debug_assert!(sum[1..].iter().all(|&c| c == 0), "trace left F_p");
            sum[0]
        };
        for g in 0..n {
            for h in 0..n {
                let s: Vec<u32> = elems[g]
                    .iter()
                    .zip(&elems[h])
                    .map(|(a, b)| (a + b) % p)
                    .collect();
                add[g * n + h] = undigits(&s, p);
                let prod = poly_rem(poly_mul(&elems[g], &elems[h], p), &modulus, p);
                char_exp[g * n + h] = trace(&prod);
            }
        }
        let neg = elems
            .iter()
            .map(|e| undigits(&e.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        Ok(GroupSpec {
            kind: GroupKind::Field { p, k, modulus },
            order: q,
            root_order: p,
            add,
            neg,
            char_exp,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// `|G|`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The `m` such that all character values lie in `Z[zeta_m]`.
    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, GroupKind::Field { .. })
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic => format!("Z_{}", self.order),
            GroupKind::Field { .. } => format!("F_{}", self.order),
        }
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(0)
    }

    /// Element used for the fixed nontrivial character: residue 1, or the
    /// field's multiplicative identity.
    pub fn one(&self) -> GroupElem {
        GroupElem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        (0..self.order).map(GroupElem)
    }

    pub fn contains(&self, g: GroupElem) -> bool {
        g.0 < self.order
    }

    fn check(&self, g: GroupElem) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                group: self.name(),
                detail: format!("element index {}", g.0),
            })
        }
    }

    pub fn add(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        GroupElem(self.add[(g.0 * self.order + h.0) as usize])
    }

    pub fn neg(&self, g: GroupElem) -> GroupElem {
        GroupElem(self.neg[g.0 as usize])
    }

    /// Polynomial coefficients of a field element (the residue for `Z_q`).
    pub fn coeffs_of(&self, g: GroupElem) -> Vec<u32> {
        match &self.kind {
            GroupKind::Cyclic => vec![g.0],
            GroupKind::Field { p, k, .. } => digits(g.0 as u64, *p, *k as usize),
        }
    }

    /// Inverse of [`GroupSpec::coeffs_of`] for fields.
    pub fn elem_from_coeffs(&self, coeffs: &[u32]) -> Result<GroupElem> {
        match &self.kind {
            GroupKind::Cyclic if coeffs.len() == 1 && coeffs[0] < self.order => {
                Ok(GroupElem(coeffs[0]))
            }
            GroupKind::Field { p, k, .. }
                if coeffs.len() == *k as usize && coeffs.iter().all(|c| c < p) =>
            {
                Ok(GroupElem(undigits(coeffs, *p)))
            }
            _ => Err(Error::SpecMismatch {
                group: self.name(),
                detail: format!("coefficients {coeffs:?}"),
            }),
        }
    }

    /// Exponent `e` with `phi_g(h) = zeta_m^e`, `m = root_order()`.
    pub fn char_exponent(&self, g: GroupElem, h: GroupElem) -> u32 {
        self.char_exp[(g.0 * self.order + h.0) as usize]
    }

    /// `phi_g(h)`: `zeta_q^{gh}` for `Z_q`, `zeta_p^{Tr(gh)}` for `F_{p^k}`.
    pub fn char_value(&self, g: GroupElem, h: GroupElem) -> Result<CycInt> {
        self.check(g)?;
        self.check(h)?;
        Ok(CycInt::zeta_pow(
            self.root_order,
            self.char_exponent(g, h) as u64,
        ))
    }

    /// `phi_x(y) = prod_k phi_{x_k}(y_k)` as an exponent of `zeta_m`.
    pub fn tuple_char_exponent(&self, x: &Tuple, y: &Tuple) -> u32 {
        let m = self.root_order;
        x.0.iter().zip(&y.0).fold(0, |acc, (&a, &b)| {
            (acc + self.char_exp[(a * self.order + b) as usize]) % m
        })
    }

    pub fn add_tuples(&self, x: &Tuple, y: &Tuple) -> Tuple {
        Tuple(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| self.add[(a * self.order + b) as usize])
                .collect(),
        )
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An n-tuple of group elements, stored as element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<u32>);

impl Tuple {
    pub fn zero(n: usize) -> Self {
        Tuple(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The tuple at position `index` in base-q order (first coordinate most
    /// significant).
    pub fn from_index(index: u64, q: u32, n: usize) -> Self {
        let mut d = digits(index, q, n);
        d.reverse();
        Tuple(d)
    }

    /// Position in base-q order.
    pub fn index(&self, q: u32) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &d| acc * q as u64 + d as u64)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// How many coordinates of a tuple equal each group element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(counts: Vec<u32>) -> Self {
        Composition(counts)
    }

    /// `(n/q, ..., n/q)`.
    pub fn balanced(q: u32, n: u32) -> Result<Self> {
        if q == 0 || !n.is_multiple_of(q) {
            return Err(Error::Divisibility(format!("{q} does not divide {n}")));
        }
        Ok(Composition(vec![n / q; q as usize]))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts, i.e. the group order.
    pub fn parts(&self) -> usize {
        self.0.len()
    }

    /// Tuple length `n = sum of counts`.
    pub fn n(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of tuples with this composition.
    pub fn shell_size(&self) -> ExactInt {
        multinom(self.n() as u64, &self.0).expect("sum is n by construction")
    }

    /// `counts_g == counts_{-g}` for all g.
    pub fn is_negation_closed(&self, group: &GroupSpec) -> bool {
        group
            .elements()
            .all(|g| self.0[g.0 as usize] == self.0[group.neg(g).0 as usize])
    }

    /// `(r_1, ..., r_{q-1}, r_0)`.
    pub fn shift_left(&self) -> Self {
        let mut v = self.0.clone();
        v.rotate_left(1);
        Composition(v)
    }

    /// The lexicographically smallest tuple with this composition.
    pub fn representative(&self) -> Tuple {
        Tuple(
            self.0
                .iter()
                .enumerate()
                .flat_map(|(g, &c)| std::iter::repeat_n(g as u32, c as usize))
                .collect(),
        )
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Counts of each element in `x`.
pub fn comp(x: &Tuple, q: u32) -> Composition {
    let mut counts = vec![0; q as usize];
    for &d in &x.0 {
        counts[d as usize] += 1;
    }
    Composition(counts)
}

/// Number of nonzero coordinates.
pub fn weight(x: &Tuple) -> u32 {
    x.0.iter().filter(|&&d| d != 0).count() as u32
}

/// Label of a shell of `G^n`: all tuples of a Hamming weight or of a composition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShellLabel {
    Weight(u32),
    Comp(Composition),
}

impl ShellLabel {
    /// `(q-1)^i C(n,i)` or the multinomial coefficient.
    pub fn size(&self, q: u32, n: u32) -> ExactInt {
        match self {
            ShellLabel::Weight(i) => pow_int(q as u64 - 1, *i) * binom(n as u64, *i as i64),
            ShellLabel::Comp(c) => c.shell_size(),
        }
    }
}

impl fmt::Display for ShellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShellLabel::Weight(i) => write!(f, "{i}"),
            ShellLabel::Comp(c) => write!(f, "{c}"),
        }
    }
}

enum Constraint {
    Weight { target: u32 },
    Comp { counts: Vec<u32> },
}

/// Streams one shell of `G^n` in lexicographic order of digit strings.
pub struct ShellIter {
    q: u32,
    n: usize,
    constraint: Constraint,
    current: Option<Vec<u32>>,
    started: bool,
}

impl ShellIter {
    // whether `prefix` (with digit counts `used`) can be completed
    fn feasible(&self, prefix: &[u32]) -> bool {
        let remaining = self.n - prefix.len();
        match &self.constraint {
            Constraint::Weight { target } => {
                let nz = prefix.iter().filter(|&&d| d != 0).count() as u32;
                nz <= *target && (*target - nz) as usize <= remaining
            }
            Constraint::Comp { counts } => {
                let mut left = counts.clone();
                for &d in prefix {
                    if left[d as usize] == 0 {
                        return false;
                    }
                    left[d as usize] -= 1;
                }
                true
            }
        }
    }

    // smallest completion of a feasible prefix
    fn complete(&self, prefix: &mut Vec<u32>) {
        match &self.constraint {
            Constraint::Weight { target } => {
                let nz = prefix.iter().filter(|&&d| d != 0).count();
                let need = *target as usize - nz;
                let zeros = self.n - prefix.len() - need;
                prefix.extend(std::iter::repeat_n(0, zeros));
                prefix.extend(std::iter::repeat_n(1, need));
            }
            Constraint::Comp { counts } => {
                let mut left = counts.clone();
                for &d in prefix.iter() {
                    left[d as usize] -= 1;
                }
                for (g, &c) in left.iter().enumerate() {
                    prefix.extend(std::iter::repeat_n(g as u32, c as usize));
                }
            }
        }
    }
}

impl Iterator for ShellIter {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        if !self.started {
            self.started = true;
            let mut first = Vec::with_capacity(self.n);
            self.complete(&mut first);
            self.current = Some(first.clone());
            return Some(Tuple(first));
        }
        let mut cur = self.current.take()?;
        // rightmost position whose digit can be raised
        for pos in (0..self.n).rev() {
            let old = cur[pos];
            cur.truncate(pos);
            for d in old + 1..self.q {
                cur.push(d);
                if self.feasible(&cur) {
                    self.complete(&mut cur);
                    self.current = Some(cur.clone());
                    return Some(Tuple(cur));
                }
                cur.pop();
            }
        }
        None
    }
}

/// All tuples of one shell, each exactly once, in base-q order.
pub fn enumerate_shell(group: &GroupSpec, n: u32, label: &ShellLabel) -> Result<ShellIter> {
    let q = group.order();
    let constraint = match label {
        ShellLabel::Weight(i) => {
            if *i > n {
                return Err(Error::BadLabel(format!("weight {i} exceeds length {n}")));
            }
            Constraint::Weight { target: *i }
        }
        ShellLabel::Comp(c) => {
            if c.parts() != q as usize {
                return Err(Error::BadLabel(format!(
                    "composition {c} has {} parts, group order is {q}",
                    c.parts()
                )));
            }
            if c.n() != n {
                return Err(Error::BadLabel(format!(
                    "composition {c} does not sum to {n}"
                )));
            }
            Constraint::Comp {
                counts: c.counts().to_vec(),
            }
        }
    };
    Ok(ShellIter {
        q,
        n: n as usize,
        constraint,
        current: None,
        started: false,
    })
}

/// Streams all compositions of `n` into `q` parts in colexicographic order,
/// starting from `(n, 0, ..., 0)`.
pub struct CompositionIter {
    // reversed composition, walked in lexicographic order
    rev: Option<Vec<u32>>,
    started: bool,
}

impl Iterator for CompositionIter {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let emit = |rev: &Vec<u32>| Composition(rev.iter().rev().copied().collect());
        if !self.started {
            self.started = true;
            return self.rev.as_ref().map(emit);
        }
        let rev = self.rev.as_mut()?;
        let q = rev.len();
        let mut tail = 0;
        for i in (0..q.saturating_sub(1)).rev() {
            tail += rev[i + 1];
            if tail > 0 {
                rev[i] += 1;
                for slot in rev.iter_mut().take(q - 1).skip(i + 1) {
                    *slot = 0;
                }
                rev[q - 1] = tail - 1;
                return Some(emit(rev));
            }
        }
        self.rev = None;
        None
    }
}

/// All `C(n+q-1, q-1)` compositions of `n` into `q` parts.
pub fn enumerate_compositions(q: u32, n: u32) -> CompositionIter {
    let mut rev = vec![0; q as usize];
    if let Some(last) = rev.last_mut() {
        *last = n;
    }
    CompositionIter {
        rev: (q > 0).then_some(rev),
        started: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn groups() -> Vec<GroupSpec> {
        let mut gs: Vec<GroupSpec> = (2..=8).map(|q| GroupSpec::cyclic(q).unwrap()).collect();
        for q in [2, 3, 4, 5, 8, 9] {
            gs.push(GroupSpec::field_of_order(q).unwrap());
        }
        gs
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 0, 1, 1]);
        assert_eq!(default_modulus(5, 1), vec![0, 1]);
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[2, 1, 1], 3));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert!(GroupSpec::field_of_order(6).is_err());
        assert!(GroupSpec::field_with_modulus(2, 2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn char_value_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert_eq!(
            z4.char_value(GroupElem(1), GroupElem(2)).unwrap(),
            CycInt::from_int(4, -1)
        );
        for h in z4.elements() {
            assert_eq!(z4.char_value(GroupElem(0), h).unwrap(), CycInt::one(4));
        }
        // F_4 with x^2 + x + 1: Tr(1) = 1 + 1 = 0, Tr(x) = x + x^2 = 1
        let f4 = GroupSpec::field(2, 2).unwrap();
        assert_eq!(
            f4.char_value(GroupElem(1), GroupElem(1)).unwrap(),
            CycInt::one(2)
        );
        assert_eq!(
            f4.char_value(GroupElem(1), GroupElem(2)).unwrap(),
            CycInt::from_int(2, -1)
        );
        assert!(z4.char_value(GroupElem(4), GroupElem(0)).is_err());
    }

    #[test]
    fn field_arithmetic_is_consistent() {
        let f9 = GroupSpec::field(3, 2).unwrap();
        let x = f9.elem_from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.coeffs_of(x), vec![0, 1]);
        assert_eq!(f9.add(x, f9.neg(x)), f9.zero());
        assert!(f9.elem_from_coeffs(&[3, 0]).is_err());
    }

    #[test]
    fn character_laws() {
        for g in groups() {
            let q = g.order();
            for a in g.elements() {
                // first orthogonality
                let s = g.elements().fold(CycInt::zero(g.root_order()), |acc, h| {
                    &acc + &g.char_value(a, h).unwrap()
                });
                if a.0 == 0 {
                    assert_eq!(s, CycInt::from_int(g.root_order(), q), "{g}");
                } else {
                    assert!(s.is_zero(), "{g} a={a:?}");
                }
                for b in g.elements() {
                    assert_eq!(g.char_exponent(a, b), g.char_exponent(b, a));
                    for c in g.elements() {
                        let lhs = g.char_value(a, g.add(b, c)).unwrap();
                        let rhs = &g.char_value(a, b).unwrap() * &g.char_value(a, c).unwrap();
                        assert_eq!(lhs, rhs, "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn comp_and_weight_examples() {
        let t = Tuple(vec![0, 0, 0, 0]);
        assert_eq!(comp(&t, 2).counts(), &[4, 0]);
        assert_eq!(weight(&t), 0);
        let t = Tuple(vec![1, 2, 0]);
        assert_eq!(comp(&t, 3).counts(), &[1, 1, 1]);
        assert_eq!(weight(&t), 2);
        let t = Tuple(vec![1, 1, 2, 2]);
        assert_eq!(comp(&t, 3).counts(), &[0, 2, 2]);
        assert_eq!(weight(&t), 4);
    }

    #[test]
    fn shell_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(
            enumerate_shell(&z2, 4, &ShellLabel::Weight(2))
                .unwrap()
                .count(),
            6
        );
        let z3 = GroupSpec::cyclic(3).unwrap();
        let perms: Vec<Tuple> =
            enumerate_shell(&z3, 3, &ShellLabel::Comp(Composition::new(vec![1, 1, 1])))
                .unwrap()
                .collect();
        assert_eq!(
            perms,
            vec![
                Tuple(vec![0, 1, 2]),
                Tuple(vec![0, 2, 1]),
                Tuple(vec![1, 0, 2]),
                Tuple(vec![1, 2, 0]),
                Tuple(vec![2, 0, 1]),
                Tuple(vec![2, 1, 0]),
            ]
        );
        let f3 = GroupSpec::field_of_order(3).unwrap();
        let big =
            enumerate_shell(&f3, 9, &ShellLabel::Comp(Composition::new(vec![3, 3, 3]))).unwrap();
        assert_eq!(big.count(), 1680);
    }

    #[test]
    fn shell_label_errors() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert!(enumerate_shell(&z3, 3, &ShellLabel::Weight(4)).is_err());
        assert!(enumerate_shell(&z3, 3, &ShellLabel::Comp(Composition::new(vec![1, 2]))).is_err());
        assert!(
            enumerate_shell(&z3, 4, &ShellLabel::Comp(Composition::new(vec![1, 1, 1]))).is_err()
        );
    }

    #[test]
    fn shells_partition_the_space() {
        for q in 2..=4u32 {
            let g = GroupSpec::cyclic(q).unwrap();
            for n in 0..=6u32 {
                let total = (q as u64).pow(n);
                let mut by_weight = HashSet::new();
                for i in 0..=n {
                    let label = ShellLabel::Weight(i);
                    let shell: Vec<Tuple> = enumerate_shell(&g, n, &label).unwrap().collect();
                    assert_eq!(BigInt::from(shell.len()), label.size(q, n));
                    assert!(shell.windows(2).all(|w| w[0] < w[1]), "not lexicographic");
                    assert!(shell.iter().all(|t| weight(t) == i));
                    by_weight.extend(shell);
                }
                assert_eq!(by_weight.len() as u64, total);
                let mut by_comp = HashSet::new();
                for c in enumerate_compositions(q, n) {
                    let label = ShellLabel::Comp(c.clone());
                    let shell: Vec<Tuple> = enumerate_shell(&g, n, &label).unwrap().collect();
                    assert_eq!(BigInt::from(shell.len()), label.size(q, n));
                    assert!(shell.windows(2).all(|w| w[0] < w[1]));
                    assert!(shell.iter().all(|t| comp(t, q) == c));
                    by_comp.extend(shell);
                }
                assert_eq!(by_comp.len() as u64, total);
            }
        }
    }

    #[test]
    fn composition_enumeration() {
        let c: Vec<Vec<u32>> = enumerate_compositions(2, 4)
            .map(|c| c.counts().to_vec())
            .collect();
        assert_eq!(
            c,
            vec![vec![4, 0], vec![3, 1], vec![2, 2], vec![1, 3], vec![0, 4]]
        );
        assert_eq!(enumerate_compositions(3, 3).count(), 10);
        assert_eq!(enumerate_compositions(3, 6).count(), 28);
        assert_eq!(enumerate_compositions(4, 0).count(), 1);
        // colexicographic: compare from the last part
        let all: Vec<Vec<u32>> = enumerate_compositions(3, 5)
            .map(|c| c.counts().iter().rev().copied().collect())
            .collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn tuple_index_round_trip(q in 2u32..=9, n in 0usize..=7, seed in any::<u64>()) {
            let total = (q as u64).pow(n as u32);
            let idx = seed % total.max(1);
            let t = Tuple::from_index(idx, q, n);
            prop_assert_eq!(t.index(q), idx);
        }
    }
}
