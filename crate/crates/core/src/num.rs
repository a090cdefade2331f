//! Exact rational numbers.
//!
//! [`Rational`] is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator; its `Display` renders integers without a
//! `/1` suffix, which is the canonical text form used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `-383/1000`, `5`, `6/4` (reduced on the way in).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::input(format!("not a rational: {text:?}")));
        }
        s.parse::<BigInt>()
            .map_err(|_| Error::input(format!("not a rational: {text:?}")))
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) if d.starts_with('-') => {
            return Err(Error::input(format!("negative denominator in {text:?}")))
        }
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Like [`parse_rational`] but rejects anything that is not already in
/// canonical form (`6/4`, `3/1`, `+2`, `-0`).
pub fn parse_canonical_rational(text: &str) -> Result<Rational> {
    let q = parse_rational(text)?;
    if q.to_string() != text {
        return Err(Error::input(format!(
            "rational {text:?} is not canonical (expected {q})"
        )));
    }
    Ok(q)
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it is the square of a rational.
/// The non-negative root is returned.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

/// `max(|numerator|, denominator)`.
pub fn height_of(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    n.max(d)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
