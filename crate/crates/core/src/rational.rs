//! Exact rational arithmetic helpers on top of `num::BigRational`.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in canonical form by `num`.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| err())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical textual form: integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Least common multiple of the denominators, used to scale weights to integers.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        let d = v.denom();
        let g = num::integer::gcd(l.clone(), d.clone());
        l = &l / g * d;
    }
    l
}

/// Scales `r` by `scale` and returns the (exact) integer as `i64`.
pub fn scaled_i64(r: &Rational, scale: &BigInt) -> Option<i64> {
    let s = r * Rational::from_integer(scale.clone());
    if !s.denom().is_one() {
        return None;
    }
    s.numer().to_i64()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
