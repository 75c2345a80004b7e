//! Exact rational helpers on top of [`num_rational::BigRational`].
//!
//! Thresholds such as `tau`, the scaling factor `s` and normalized negative
//! degrees are compared exactly; floating point never enters a decision.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::ParseRationalError;

pub type Rational = num_rational::BigRational;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn floor_to_biguint(r: &Rational) -> BigUint {
    debug_assert!(!r.is_negative());
    r.floor().to_integer().to_biguint().unwrap_or_default()
}

pub fn ceil_to_biguint(r: &Rational) -> BigUint {
    debug_assert!(!r.is_negative());
    r.ceil().to_integer().to_biguint().unwrap_or_default()
}

/// `floor(m / s)` for a positive multiplicity and a positive rational.
pub fn floor_div(m: u64, s: &Rational) -> u64 {
    let q = (int(m) / s).floor().to_integer();
    q.to_u64().unwrap_or(u64::MAX)
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`, exactly.
pub fn harmonic(n: u64) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, i| acc + Rational::new(One::one(), BigInt::from(i)))
}

/// `"p/q"` in lowest terms; integers print as `"p"`.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"0.125"`.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    let bad = || ParseRationalError(text.to_string());
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

/// Lossy conversion for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn gcd_reduced(r: &Rational) -> bool {
    r.numer().gcd(r.denom()).is_one()
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse(&text).map_err(serde::de::Error::custom)
}

/// Serde adapter for arbitrary-precision integers as decimal strings.
pub mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("1/8").unwrap(), ratio(1, 8));
        assert_eq!(parse("2/16").unwrap(), ratio(1, 8));
        assert_eq!(parse("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("3").unwrap(), int(3));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
        assert!(parse("1.2.3").is_err());
    }

    #[test]
    fn prints_lowest_terms() {
        assert_eq!(to_string(&ratio(6, 8)), "3/4");
        assert_eq!(to_string(&int(5)), "5");
        assert!(gcd_reduced(&ratio(6, 8)));
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(3), ratio(11, 6));
        assert_eq!(harmonic(0), int(0));
    }

    #[test]
    fn floor_division() {
        assert_eq!(floor_div(10, &int(3)), 3);
        assert_eq!(floor_div(10, &ratio(5, 2)), 4);
        assert_eq!(floor_div(1, &ratio(3, 2)), 0);
    }
}
