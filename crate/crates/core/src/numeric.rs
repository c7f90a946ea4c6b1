// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact and log-domain numeric helpers.
//!
//! Thresholds and exponents arrive as `f64` but are compared exactly where
//! possible. A user-supplied `f64` is read as the shortest decimal that
//! round-trips to it, so `0.1` means one tenth rather than the binary
//! neighbour `0.1000000000000000055…`.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest integer below which `f64` represents every integer exactly.
pub const F64_EXACT_INT: u64 = 1 << 53;

/// Largest numerator/denominator kept for exact rational exponents.
pub const MAX_EXACT_EXPONENT_PART: u32 = 64;

/// Parses the shortest round-trip decimal of `x` into an exact rational.
pub fn decimal_rational(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite value {x}")));
    }
    if x == 0.0 {
        return Ok(BigRational::zero());
    }
    let text = format!("{:e}", x);
    let (mantissa, exponent) = text
        .split_once('e')
        .expect("`{:e}` always emits an exponent");
    let exponent: i64 = exponent.parse().expect("valid exponent");
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches('-');
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .expect("decimal digits");
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// A comparison threshold carried both as `f64` and as its exact decimal value.
#[derive(Clone, Debug, PartialEq)]
pub struct Threshold {
    value: f64,
    exact: BigRational,
}

impl Threshold {
    pub fn new(value: f64) -> Result<Self> {
        Ok(Self {
            value,
            exact: decimal_rational(value)?,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    /// Numerator and denominator of a positive threshold.
    pub(crate) fn parts(&self) -> (BigUint, BigUint) {
        let numer = self.exact.numer().magnitude().clone();
        let denom = self.exact.denom().magnitude().clone();
        (numer, denom)
    }

    pub fn is_positive(&self) -> bool {
        self.exact.is_positive()
    }
}

/// A non-negative real exponent, kept as a small exact ratio when possible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Exponent {
    value: f64,
    exact: Option<(u32, u32)>,
}

impl Exponent {
    pub fn from_f64(value: f64) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponent must be finite and non-negative, got {value}"
            )));
        }
        Ok(Self::from_rational(&decimal_rational(value)?))
    }

    /// Exact `numer / denom`.
    pub fn ratio(numer: u32, denom: u32) -> Self {
        assert!(denom > 0, "zero denominator");
        Self::from_rational(&BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_rational(value: &BigRational) -> Self {
        let approx = value.to_f64().unwrap_or(f64::NAN);
        let small = |v: &BigInt| v.to_u32().filter(|&x| x <= MAX_EXACT_EXPONENT_PART);
        let exact = match (small(value.numer()), small(value.denom())) {
            (Some(n), Some(d)) if !value.is_negative() => Some((n, d)),
            _ => None,
        };
        Self {
            value: approx,
            exact,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<(u32, u32)> {
        self.exact
    }

    /// Exact rational value when known, otherwise the decimal reading of the `f64`.
    pub fn to_rational(&self) -> BigRational {
        match self.exact {
            Some((n, d)) => BigRational::new(n.into(), d.into()),
            None => decimal_rational(self.value).expect("finite exponent"),
        }
    }

    /// Exponent product, exact when both sides are.
    pub fn mul(&self, other: &Exponent) -> Exponent {
        match (self.exact, other.exact) {
            (Some(_), Some(_)) => {
                Exponent::from_rational(&(self.to_rational() * other.to_rational()))
            }
            _ => Exponent {
                value: self.value * other.value,
                exact: None,
            },
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Exponent::from_f64(value)
    }
}

impl From<Exponent> for f64 {
    fn from(e: Exponent) -> f64 {
        e.value
    }
}

/// Natural logarithm of a positive big integer, valid far beyond `f64` range.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("below f64 range").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `x` as `f64`, saturating to infinity.
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `(width)^gamma`, direct for exactly representable widths and log-domain otherwise.
pub fn h_gamma(width: &BigUint, gamma: f64) -> f64 {
    match width.to_u64() {
        Some(w) if w < F64_EXACT_INT => (w as f64).powf(gamma),
        _ => (gamma * big_ln(width)).exp(),
    }
}

/// `count / width^gamma` without overflow.
pub fn density(count: &BigUint, width: &BigUint, gamma: f64) -> f64 {
    if count.is_zero() {
        return 0.0;
    }
    match (count.to_u64(), width.to_u64()) {
        (Some(c), Some(w)) if c < F64_EXACT_INT && w < F64_EXACT_INT => {
            c as f64 / (w as f64).powf(gamma)
        }
        _ => (big_ln(count) - gamma * big_ln(width)).exp(),
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Floor of the `n`-th root.
pub fn iroot(x: &BigUint, n: u32) -> BigUint {
    assert!(n >= 1);
    if n == 1 {
        x.clone()
    } else {
        x.nth_root(n)
    }
}

/// Ceiling of the `n`-th root.
pub fn ceil_root(x: &BigUint, n: u32) -> BigUint {
    let r = iroot(x, n);
    if num_traits::pow(r.clone(), n as usize) < *x {
        r + 1u32
    } else {
        r
    }
}

/// `ceil(a / b)` for `b > 0`.
pub fn div_ceil(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

pub fn checked_pow_u128(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// Floor of the `n`-th root of a `u128`.
pub fn iroot_u128(x: u128, n: u32) -> u128 {
    if n == 1 {
        x
    } else {
        x.nth_root(n)
    }
}

/// Largest `k` in `[lo, hi]` with `pred(k)` true, for `pred` true-then-false.
///
/// Returns `None` when `pred(lo)` is false.
pub fn last_true(lo: &BigUint, hi: &BigUint, pred: impl Fn(&BigUint) -> bool) -> Option<BigUint> {
    if lo > hi || !pred(lo) {
        return None;
    }
    if pred(hi) {
        return Some(hi.clone());
    }
    // invariant: pred(a) && !pred(b)
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while &b - &a > BigUint::one() {
        let mid = (&a + &b) >> 1u32;
        if pred(&mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(a)
}

/// Smallest `k` in `[lo, hi]` with `pred(k)` true, for `pred` false-then-true.
pub fn first_true(lo: &BigUint, hi: &BigUint, pred: impl Fn(&BigUint) -> bool) -> Option<BigUint> {
    if lo > hi || !pred(hi) {
        return None;
    }
    if pred(lo) {
        return Some(lo.clone());
    }
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while &b - &a > BigUint::one() {
        let mid = (&a + &b) >> 1u32;
        if pred(&mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(b)
}
