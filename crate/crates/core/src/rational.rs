//! Exact rational helpers shared by every module.
//!
//! Rationals travel as decimal-free `"p/q"` strings on every external
//! surface; integers are accepted without a denominator on input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Exact rational number used throughout the engine.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// `(-1)^n` as an integer sign.
pub fn sign_pow(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("degree out of i64 range")
}

pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("degree out of i64 range")
}

/// Integer value of `x` if it has denominator one.
pub fn as_integer(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn inv_factorial(n: u32) -> Q {
    Q::new(BigInt::one(), factorial(n))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Serialize as `p/q` (always with an explicit denominator).
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `p/q` or `p`. Decimal points, exponents and zero denominators are rejected.
pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    let (p, d) = match t.split_once('/') {
        Some((p, d)) => (p.trim(), d.trim()),
        None => (t, "1"),
    };
    let p = parse_bigint(p).ok_or_else(bad)?;
    let d = parse_bigint(d).ok_or_else(bad)?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(p, d))
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || digits.len() > 4096 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// gcd of two integers, `gcd(0, 0) = 0`.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
