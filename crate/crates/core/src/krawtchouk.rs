//! Classical and generalized Krawtchouk polynomials.
//!
//! `K_i(j)` is the eigenvalue of the Hamming graph `H(n,q,i)` on characters
//! of weight `j`. The generalized version `K_i(j)` for compositions is the
//! eigenvalue of the composition graph with connection shell `i` on
//! characters of composition `j`; it is a cyclotomic integer, computed
//! either by summing characters over the shell or by extracting the
//! coefficient of `z^i` from `prod_h (sum_g phi_h(g) z_g)^{j_h}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binom, multinom, pow_int, CycInt, ExactInt, RootSum};
use crate::groups::{enumerate_shell, Composition, GroupSpec, ShellLabel};

/// Length and alphabet size of a Krawtchouk family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KrawParams {
    pub n: u32,
    pub q: u32,
}

impl KrawParams {
    pub fn new(n: u32, q: u32) -> Result<Self> {
        if n < 1 || q < 2 {
            return Err(Error::Domain(format!(
                "Krawtchouk parameters need n >= 1, q >= 2 (got n={n}, q={q})"
            )));
        }
        Ok(KrawParams { n, q })
    }
}

/// `K_i(j) = sum_k (-1)^k (q-1)^{i-k} C(j,k) C(n-j,i-k)`.
pub fn kraw(params: KrawParams, i: u32, j: u32) -> Result<ExactInt> {
    let KrawParams { n, q } = params;
    if i > n || j > n {
        return Err(Error::Range(format!("K_{i}({j}) with n = {n}")));
    }
    let mut sum = BigInt::zero();
    for k in 0..=i {
        let term = pow_int(q as u64 - 1, i - k)
            * binom(j as u64, k as i64)
            * binom((n - j) as u64, (i - k) as i64);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Smallest `j >= 1` with `K_d(j) <= 0`, i.e. the first integer at or past
/// the smallest root of `K_d`.
pub fn first_nonpositive(params: KrawParams, d: u32) -> Result<u32> {
    if d < 1 || d > params.n {
        return Err(Error::Range(format!("degree {d} with n = {}", params.n)));
    }
    for j in 1..=params.n {
        if !kraw(params, d, j)?.is_positive() {
            return Ok(j);
        }
    }
    Err(Error::NotFound(format!(
        "K_{d}(j) > 0 for all 1 <= j <= {}",
        params.n
    )))
}

/// Limit of `z_1^{(delta n)} / n`, the normalized smallest root of `K_{delta n}`,
/// as `n` grows. Float diagnostic only.
pub fn smallest_root_ratio(q: u32, delta: f64) -> f64 {
    let q = q as f64;
    (q - 1.0 - (q - 2.0) * delta - 2.0 * ((q - 1.0) * delta * (1.0 - delta)).sqrt()) / q
}

/// A generalized Krawtchouk value with its integer certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenKrawValue {
    pub value: CycInt,
    /// Present exactly when `value` is a rational integer.
    pub certified_integer: Option<ExactInt>,
}

impl GenKrawValue {
    pub fn new(value: CycInt) -> Self {
        let certified_integer = value.as_integer().cloned();
        GenKrawValue {
            value,
            certified_integer,
        }
    }

    pub fn integer(k: impl Into<BigInt>) -> Self {
        Self::new(CycInt::from_int(1, k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKrawMethod {
    /// Character sum over every tuple of the shell.
    Brute,
    /// Coefficient extraction from the product of character linear forms.
    Extraction,
}

fn check_comp(group: &GroupSpec, n: u32, c: &Composition) -> Result<()> {
    if c.parts() != group.order() as usize || c.n() != n {
        return Err(Error::SumMismatch {
            parts: c.counts().to_vec(),
            actual: c.n() as u64,
            expected: n as u64,
        });
    }
    Ok(())
}

/// `K^{(G)}_i(j)`.
pub fn gen_kraw(
    group: &GroupSpec,
    n: u32,
    i: &Composition,
    j: &Composition,
    method: GenKrawMethod,
) -> Result<GenKrawValue> {
    check_comp(group, n, i)?;
    check_comp(group, n, j)?;
    let value = match method {
        GenKrawMethod::Brute => brute(group, n, i, j)?,
        GenKrawMethod::Extraction => extraction(group, i, j),
    };
    Ok(GenKrawValue::new(value))
}

fn brute(group: &GroupSpec, n: u32, i: &Composition, j: &Composition) -> Result<CycInt> {
    let m = group.root_order();
    let x = j.representative();
    let mut hist = vec![0i64; m as usize];
    for y in enumerate_shell(group, n, &ShellLabel::Comp(i.clone()))? {
        hist[group.tuple_char_exponent(&x, &y) as usize] += 1;
    }
    Ok(RootSum::from_counts(m, &hist).to_cyc())
}

// Dense table over the partial compositions s <= target, mixed radix.
struct Lattice {
    dims: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Lattice {
    fn new(target: &[u32]) -> Self {
        let dims: Vec<usize> = target.iter().map(|&t| t as usize + 1).collect();
        let mut strides = vec![0; dims.len()];
        let mut size = 1;
        for (s, d) in strides.iter_mut().zip(&dims) {
            *s = size;
            size *= d;
        }
        Lattice {
            dims,
            strides,
            size,
        }
    }

    fn digit(&self, idx: usize, g: usize) -> usize {
        (idx / self.strides[g]) % self.dims[g]
    }
}

fn extraction(group: &GroupSpec, i: &Composition, j: &Composition) -> CycInt {
    let m = group.root_order();
    let lat = Lattice::new(i.counts());
    let mut cur: Vec<RootSum> = vec![RootSum::new(m); lat.size];
    cur[0] = RootSum::unit(m);
    for h in group.elements() {
        let exps: Vec<u32> = group
            .elements()
            .map(|g| group.char_exponent(h, g))
            .collect();
        for _ in 0..j.counts()[h.0 as usize] {
            let mut next = vec![RootSum::new(m); lat.size];
            for (idx, val) in cur.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                for (g, &e) in exps.iter().enumerate() {
                    if lat.digit(idx, g) + 1 < lat.dims[g] {
                        next[idx + lat.strides[g]].add_rotated(val, e);
                    }
                }
            }
            cur = next;
        }
    }
    cur[lat.size - 1].to_cyc()
}

/// Terms of `det C(z)` for the `q x q` circulant `C(z)_{a,b} = z_{b-a}`,
/// as (exponent vector, coefficient). Supported for `q <= 7`.
pub fn circulant_determinant(q: u32) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    if q > 7 {
        return Err(Error::UnsupportedSize(format!(
            "circulant determinant by permutation sum needs q <= 7, got {q}"
        )));
    }
    if q < 1 {
        return Err(Error::Domain("q must be positive".into()));
    }
    let q = q as usize;
    let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..q).collect();
    permute(&mut perm, 0, false, &mut |sigma, odd| {
        let mut exps = vec![0u32; q];
        for (a, &b) in sigma.iter().enumerate() {
            exps[(b + q - a) % q] += 1;
        }
        let e = terms.entry(exps).or_insert_with(BigInt::zero);
        if odd {
            *e -= 1;
        } else {
            *e += 1;
        }
    });
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

// visits every permutation of perm[k..] with its parity
fn permute(perm: &mut Vec<usize>, k: usize, odd: bool, visit: &mut impl FnMut(&[usize], bool)) {
    if k == perm.len() {
        visit(perm, odd);
        return;
    }
    for s in k..perm.len() {
        perm.swap(k, s);
        permute(perm, k + 1, odd ^ (s != k), visit);
        perm.swap(k, s);
    }
}

/// `K^{(Z_q)}_{n/q}(r)` through `multinom(n, n/q) / multinom(n, r) * [z^r] det C(z)^{n/q}`.
pub fn gen_kraw_circulant(q: u32, n: u32, r: &Composition) -> Result<ExactInt> {
    if q < 2 || !n.is_multiple_of(q) {
        return Err(Error::Divisibility(format!("{q} does not divide {n}")));
    }
    if r.parts() != q as usize || r.n() != n {
        return Err(Error::SumMismatch {
            parts: r.counts().to_vec(),
            actual: r.n() as u64,
            expected: n as u64,
        });
    }
    let det = circulant_determinant(q)?;
    let lat = Lattice::new(r.counts());
    let mut cur = vec![BigInt::zero(); lat.size];
    cur[0] = BigInt::one();
    for _ in 0..n / q {
        let mut next = vec![BigInt::zero(); lat.size];
        for (idx, val) in cur.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            'terms: for (exps, coef) in &det {
                let mut target = idx;
                for (g, &e) in exps.iter().enumerate() {
                    if lat.digit(idx, g) + e as usize >= lat.dims[g] {
                        continue 'terms;
                    }
                    target += e as usize * lat.strides[g];
                }
                next[target] += val * coef;
            }
        }
        cur = next;
    }
    let coefficient = cur[lat.size - 1].clone();
    let balanced = vec![n / q; q as usize];
    let ratio = BigRational::new(
        multinom(n as u64, &balanced)?,
        multinom(n as u64, r.counts())?,
    );
    let value = ratio * BigRational::from_integer(coefficient);
    if !value.is_integer() {
        return Err(Error::Divisibility(format!(
            "circulant extraction at {r} gave non-integer {value}"
        )));
    }
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::enumerate_compositions;

    fn p(n: u32, q: u32) -> KrawParams {
        KrawParams::new(n, q).unwrap()
    }

    fn c(v: &[u32]) -> Composition {
        Composition::new(v.to_vec())
    }

    #[test]
    fn kraw_examples() {
        assert_eq!(kraw(p(4, 2), 2, 2).unwrap(), BigInt::from(-2));
        for j in 0..=5 {
            assert_eq!(kraw(p(5, 3), 0, j).unwrap(), BigInt::one());
        }
        assert_eq!(kraw(p(3, 3), 3, 1).unwrap(), BigInt::from(-4));
        assert!(kraw(p(3, 3), 4, 0).is_err());
        assert!(KrawParams::new(0, 2).is_err());
        assert!(KrawParams::new(3, 1).is_err());
    }

    #[test]
    fn kraw_matches_character_sum_over_weight_shell() {
        // independent route: sum_{y in S_i} phi_x(y) for x of weight j
        for (n, q) in [(4u32, 2u32), (3, 3), (4, 3), (3, 4)] {
            let g = GroupSpec::cyclic(q).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    let mut x = vec![0u32; n as usize];
                    x.iter_mut().take(j as usize).for_each(|d| *d = 1);
                    let x = crate::groups::Tuple(x);
                    let mut hist = vec![0i64; q as usize];
                    for y in enumerate_shell(&g, n, &ShellLabel::Weight(i)).unwrap() {
                        hist[g.tuple_char_exponent(&x, &y) as usize] += 1;
                    }
                    let s = RootSum::from_counts(q, &hist).to_cyc();
                    assert_eq!(s.as_integer(), Some(&kraw(p(n, q), i, j).unwrap()));
                }
            }
        }
    }

    #[test]
    fn first_nonpositive_examples() {
        assert_eq!(first_nonpositive(p(4, 2), 2).unwrap(), 1);
        assert_eq!(first_nonpositive(p(3, 3), 3).unwrap(), 1);
        assert_eq!(first_nonpositive(p(5, 2), 2).unwrap(), 2);
        assert!(first_nonpositive(p(5, 2), 0).is_err());
        assert!(first_nonpositive(p(5, 2), 6).is_err());
    }

    #[test]
    fn first_nonpositive_always_found() {
        for q in 2..=5 {
            for n in 1..=10 {
                for d in 1..=n {
                    let j = first_nonpositive(p(n, q), d).unwrap();
                    assert!(kraw(p(n, q), d, j).unwrap() <= BigInt::zero());
                    for before in 1..j {
                        assert!(kraw(p(n, q), d, before).unwrap() > BigInt::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn smallest_root_ratio_endpoints() {
        // delta -> 0: root near (q-1)/q; delta = (q-1)/q: root at 0
        assert!((smallest_root_ratio(2, 0.0) - 0.5).abs() < 1e-15);
        assert!(smallest_root_ratio(3, 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gen_kraw_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let z3 = GroupSpec::cyclic(3).unwrap();
        for method in [GenKrawMethod::Brute, GenKrawMethod::Extraction] {
            let v = gen_kraw(&z2, 4, &c(&[2, 2]), &c(&[2, 2]), method).unwrap();
            assert_eq!(v.certified_integer, Some(BigInt::from(-2)));
            let v = gen_kraw(&z3, 3, &c(&[1, 1, 1]), &c(&[2, 1, 0]), method).unwrap();
            assert!(v.value.is_zero());
            let v = gen_kraw(&z3, 3, &c(&[1, 1, 1]), &c(&[3, 0, 0]), method).unwrap();
            assert_eq!(v.certified_integer, Some(BigInt::from(6)));
        }
        assert!(matches!(
            gen_kraw(&z3, 3, &c(&[1, 1, 0]), &c(&[3, 0, 0]), GenKrawMethod::Brute),
            Err(Error::SumMismatch { .. })
        ));
    }

    #[test]
    fn brute_and_extraction_agree_small() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let f4 = GroupSpec::field_of_order(4).unwrap();
        for g in [z4, f4] {
            for i in enumerate_compositions(4, 3) {
                for j in enumerate_compositions(4, 3) {
                    let a = gen_kraw(&g, 3, &i, &j, GenKrawMethod::Brute).unwrap();
                    let b = gen_kraw(&g, 3, &i, &j, GenKrawMethod::Extraction).unwrap();
                    assert_eq!(a, b, "{g} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn circulant_determinant_small() {
        let d2 = circulant_determinant(2).unwrap();
        assert_eq!(d2.len(), 2);
        assert_eq!(d2[&vec![2, 0]], BigInt::one());
        assert_eq!(d2[&vec![0, 2]], BigInt::from(-1));
        // det of 3x3 circulant: z0^3 + z1^3 + z2^3 - 3 z0 z1 z2
        let d3 = circulant_determinant(3).unwrap();
        assert_eq!(d3.len(), 4);
        assert_eq!(d3[&vec![1, 1, 1]], BigInt::from(-3));
        assert_eq!(d3[&vec![0, 3, 0]], BigInt::one());
        assert!(matches!(
            circulant_determinant(8),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn circulant_examples() {
        assert_eq!(
            gen_kraw_circulant(2, 4, &c(&[2, 2])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(
            gen_kraw_circulant(3, 3, &c(&[1, 1, 1])).unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(
            gen_kraw_circulant(3, 3, &c(&[3, 0, 0])).unwrap(),
            BigInt::from(6)
        );
        assert!(matches!(
            gen_kraw_circulant(3, 4, &c(&[2, 1, 1])),
            Err(Error::Divisibility(_))
        ));
        assert!(gen_kraw_circulant(8, 8, &c(&[1; 8])).is_err());
    }

    #[test]
    fn circulant_matches_generic_path() {
        for (q, n) in [(2u32, 4u32), (2, 6), (3, 3), (3, 6), (4, 4), (5, 5)] {
            let g = GroupSpec::cyclic(q).unwrap();
            let bal = Composition::balanced(q, n).unwrap();
            for r in enumerate_compositions(q, n) {
                let generic = gen_kraw(&g, n, &bal, &r, GenKrawMethod::Extraction).unwrap();
                let circ = gen_kraw_circulant(q, n, &r).unwrap();
                assert_eq!(generic.certified_integer, Some(circ), "q={q} n={n} r={r}");
            }
        }
    }

    mod props {
        use super::*;
        use crate::exactnum::{binom, pow_int};
        use proptest::prelude::*;

        fn shell(n: u32, q: u32, i: u32) -> BigInt {
            pow_int(q as u64 - 1, i) * binom(n as u64, i as i64)
        }

        proptest! {
            #[test]
            fn reciprocity(n in 1u32..30, q in 2u32..9, i in 0u32..30, j in 0u32..30) {
                let (i, j) = (i % (n + 1), j % (n + 1));
                let pp = p(n, q);
                prop_assert_eq!(
                    shell(n, q, j) * kraw(pp, i, j).unwrap(),
                    shell(n, q, i) * kraw(pp, j, i).unwrap()
                );
            }

            #[test]
            fn orthogonality(n in 1u32..12, q in 2u32..6, i in 0u32..12, l in 0u32..12) {
                let (i, l) = (i % (n + 1), l % (n + 1));
                let pp = p(n, q);
                let sum: BigInt = (0..=n)
                    .map(|j| shell(n, q, j) * kraw(pp, i, j).unwrap() * kraw(pp, l, j).unwrap())
                    .sum();
                let want = if i == l { pow_int(q as u64, n) * shell(n, q, i) } else { BigInt::from(0) };
                prop_assert_eq!(sum, want);
            }

            #[test]
            fn routes_agree(q in 2u32..5, n in 1u32..5, field in any::<bool>(), a in any::<u64>(), b in any::<u64>()) {
                let g = if field && q != 2 {
                    match GroupSpec::field_of_order(q) {
                        Ok(f) => f,
                        Err(_) => GroupSpec::cyclic(q).unwrap(),
                    }
                } else {
                    GroupSpec::cyclic(q).unwrap()
                };
                let comps: Vec<Composition> = enumerate_compositions(q, n).collect();
                let i = &comps[(a % comps.len() as u64) as usize];
                let j = &comps[(b % comps.len() as u64) as usize];
                prop_assert_eq!(
                    gen_kraw(&g, n, i, j, GenKrawMethod::Brute).unwrap(),
                    gen_kraw(&g, n, i, j, GenKrawMethod::Extraction).unwrap()
                );
            }
        }
    }
}
