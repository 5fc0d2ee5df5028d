//! Exact rationals and their string forms.
//!
//! Rationals travel through JSON and the command line as strings (`"p/q"`,
//! `"p"`, or a finite decimal such as `"-0.9"`) so that no precision is lost.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal like `"-0.9"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {text:?}")));
        }
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {text:?}")));
        }
        let digits = format!("{}{}", whole_digits, frac);
        let num = BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("bad decimal {text:?}")))?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let value = Rational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| Error::Parse(format!("bad rational {text:?}")))
}

pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators and denominators: scale down before dividing.
    let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
    let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn approximate(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - rest.floor();
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let value = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if negative { -value } else { value })
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (Stern-Brocot descent).
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let (lo, hi) = if lo <= hi { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
    if lo <= Rational::zero() && hi >= Rational::zero() {
        return Rational::zero();
    }
    if hi < Rational::zero() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(&lo, &hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // Same integer part: recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_positive(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Least common multiple of all denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Serde adapter storing a rational as its string form.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
