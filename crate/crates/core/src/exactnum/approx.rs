use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::CycInt;

/// Mantissa bits of the base embedding (plain `f64`).
pub const DEFAULT_BITS: u32 = 53;

/// Declared error per multiply-accumulate at the base level.
const BASE_MAC_ERROR: f64 = 1e-12;

/// Floating-point image of a cyclotomic integer under `zeta_m -> e^{2 pi i / m}`.
///
/// `precision` bounds the distance between `(re, im)` and the true complex
/// value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub precision: f64,
}

impl ComplexApprox {
    /// The sign of the real part when it is certain, `None` when the real
    /// part is within `precision` of zero.
    pub fn certain_sign(&self) -> Option<std::cmp::Ordering> {
        if self.re > self.precision {
            Some(std::cmp::Ordering::Greater)
        } else if self.re < -self.precision {
            Some(std::cmp::Ordering::Less)
        } else {
            None
        }
    }
}

impl CycInt {
    /// Embedding at the default precision.
    pub fn approx(&self) -> ComplexApprox {
        self.approx_bits(DEFAULT_BITS)
    }

    /// Embedding with roughly `bits` bits of absolute accuracy per unit of
    /// coefficient mass. Up to 53 bits this is ordinary `f64` arithmetic;
    /// above that the roots of unity are evaluated in fixed point.
    pub fn approx_bits(&self, bits: u32) -> ComplexApprox {
        if bits <= DEFAULT_BITS {
            return self.approx_f64();
        }
        self.approx_fixed(bits)
    }

    fn approx_f64(&self) -> ComplexApprox {
        let m = self.order() as f64;
        let (mut re, mut im, mut mass) = (0.0f64, 0.0f64, 1.0f64);
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::INFINITY);
            let (s, co) = (std::f64::consts::TAU * k as f64 / m).sin_cos();
            re += c * co;
            im += c * s;
            mass += c.abs();
        }
        ComplexApprox {
            re,
            im,
            precision: BASE_MAC_ERROR * mass,
        }
    }

    fn approx_fixed(&self, bits: u32) -> ComplexApprox {
        let work = bits + 32;
        let pi = fixed_pi(work);
        let m = self.order() as i64;
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        let mut mass = BigInt::from(1);
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // angle 2 pi k / m reduced into (-pi, pi]
            let k = k as i64;
            let k = if 2 * k > m { k - m } else { k };
            let theta = (&pi * BigInt::from(2 * k)) / BigInt::from(m);
            let (s, co) = fixed_sin_cos(&theta, work);
            re += c * co;
            im += c * s;
            mass += c.abs();
        }
        let re = fixed_to_f64(&re, work);
        let im = fixed_to_f64(&im, work);
        let mass = mass.to_f64().unwrap_or(f64::INFINITY);
        // fixed-point truncation (well under 2^-bits per unit mass) plus the
        // final rounding to f64
        let precision = mass * 2f64.powi(-(bits as i32)) + (re.abs() + im.abs()) * f64::EPSILON;
        ComplexApprox { re, im, precision }
    }
}

fn fixed_to_f64(v: &BigInt, frac_bits: u32) -> f64 {
    let len = v.bits() as i64;
    let shift = len - 64;
    if shift > 0 {
        let top = (v >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((shift - frac_bits as i64) as i32)
    } else {
        v.to_f64().unwrap_or(0.0) * 2f64.powi(-(frac_bits as i32))
    }
}

/// `atan(1/x)` scaled by `2^bits`.
fn fixed_atan_inv(x: u64, bits: u32) -> BigInt {
    let one = BigInt::from(1) << bits as usize;
    let x2 = BigInt::from(x * x);
    let mut term = one / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= &x2;
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

/// pi scaled by `2^bits` (Machin's formula).
fn fixed_pi(bits: u32) -> BigInt {
    let guard = 16;
    let b = bits + guard;
    let pi = fixed_atan_inv(5, b) * 16 - fixed_atan_inv(239, b) * 4;
    pi >> guard as usize
}

/// `(sin t, cos t)` for `|t| <= pi`, all values scaled by `2^bits`.
fn fixed_sin_cos(theta: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::from(1) << bits as usize;
    let t2 = (theta * theta) >> bits as usize;
    let mut sin = theta.clone();
    let mut cos = one.clone();
    let mut s_term = theta.clone();
    let mut c_term = one;
    let mut j = 1u64;
    while !(s_term.is_zero() && c_term.is_zero()) {
        c_term = -((&c_term * &t2) >> bits as usize) / ((2 * j - 1) * (2 * j));
        s_term = -((&s_term * &t2) >> bits as usize) / ((2 * j) * (2 * j + 1));
        cos += &c_term;
        sin += &s_term;
        j += 1;
    }
    (sin, cos)
}
