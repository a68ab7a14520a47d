//! Exact integers, rationals and cyclotomic integers, plus the counting
//! functions every other module is built from.
//!
//! Integers and rationals are plain [`num_bigint::BigInt`] and
//! [`num_rational::BigRational`]; nothing in this crate ever rounds them.
//! Cyclotomic integers ([`CycInt`]) live in `Z[x]/(Phi_m(x))` with the
//! power basis, so two values are equal exactly when their coefficient
//! vectors are.

mod approx;
mod cyclotomic;

pub use approx::{ComplexApprox, DEFAULT_BITS};
pub use cyclotomic::{cyclotomic_poly, CycInt, RootSum, RootTable};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Unbounded signed integer.
pub type ExactInt = BigInt;

/// Quotient of [`ExactInt`]s, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    // acc stays equal to C(n - k + i, i) after step i, so every division is exact
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Multinomial coefficient `n! / prod(parts_g!)`.
pub fn multinom(n: u64, parts: &[u32]) -> Result<ExactInt> {
    let total: u64 = parts.iter().map(|&p| p as u64).sum();
    if total != n {
        return Err(Error::SumMismatch {
            parts: parts.to_vec(),
            actual: total,
            expected: n,
        });
    }
    let mut acc = BigInt::one();
    let mut placed = 0u64;
    for &p in parts {
        placed += p as u64;
        acc *= binom(placed, p as i64);
    }
    Ok(acc)
}

/// `(base)^exp` as an exact integer.
pub fn pow_int(base: u64, exp: u32) -> ExactInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Converts an exact rational to the nearest `f64` (for diagnostics only).
pub fn rational_to_f64(r: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// The q-ary entropy function
/// `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)` on `[0, (q-1)/q]`.
///
/// The endpoints use the limit conventions `h_q(0) = 0` and
/// `h_q((q-1)/q) = 1`.
pub fn entropy_q(q: u32, x: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!("entropy_q needs q >= 2, got {q}")));
    }
    let top = (q - 1) as f64 / q as f64;
    if !(0.0..=top).contains(&x) || x.is_nan() {
        return Err(Error::Domain(format!(
            "entropy_q({q}, {x}) outside [0, {top}]"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == top {
        return Ok(1.0);
    }
    let ln_q = (q as f64).ln();
    let mut h = x * ((q - 1) as f64).ln() - x * x.ln();
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).ln();
    }
    Ok(h / ln_q)
}
