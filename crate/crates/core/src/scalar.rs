//! Numeric regimes: exact rationals and tolerance-carrying floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational. `BigRational` keeps the canonical
/// reduced form (gcd 1, positive denominator) after every operation.
pub type Scalar = BigRational;

/// Default absolute error budget attached to approximate results.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A floating value produced by an approximate step (square roots,
/// quadrature) together with its absolute error budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxScalar {
    pub value: f64,
    pub tol: f64,
}

impl ApproxScalar {
    pub fn new(value: f64) -> Self {
        ApproxScalar { value, tol: DEFAULT_TOL }
    }

    pub fn with_tol(value: f64, tol: f64) -> Self {
        ApproxScalar { value, tol }
    }

    /// `|self - other| <= tol` using the larger of the two budgets.
    pub fn approx_eq(&self, other: f64) -> bool {
        (self.value - other).abs() <= self.tol
    }
}

impl fmt::Display for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (±{:e})", self.value, self.tol)
    }
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Scalar) -> f64 {
    // `BigRational::to_f64` handles huge numerators and denominators by
    // scaling, so this stays finite for representable values.
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact binary expansion of a finite float.
pub fn from_f64(v: f64) -> Result<Scalar> {
    Scalar::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite number {v}")))
}

/// Parses `"p/q"`, integers and decimal strings (`"-1.25"`, `"3e-2"`) exactly.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Scalar::from_integer(n));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad number {s:?}")))
}

fn parse_decimal(s: &str) -> Option<Scalar> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut value = Scalar::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac.len() as i32;
    let ten = Scalar::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// `"p/q"` or `"p"` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Square root of a non-negative rational as a float.
pub fn sqrt_f64(x: &Scalar) -> f64 {
    to_f64(x).max(0.0).sqrt()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_scalar {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        crate::io::scalar_from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub mod serde_scalar_opt {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_str(&format_scalar(x)),
            None => s.serialize_none(),
        }
    }
}

pub mod serde_scalar_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_scalar(x))?;
        }
        seq.end()
    }
}

pub mod serde_bigint_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            match x.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_scalar("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("-7").unwrap(), int(-7));
        assert_eq!(parse_scalar("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_scalar("-2.5e-1").unwrap(), ratio(-1, 4));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn float_conversion_is_exact_binary_expansion() {
        assert_eq!(from_f64(0.375).unwrap(), ratio(3, 8));
        let tenth = from_f64(0.1).unwrap();
        assert_ne!(tenth, ratio(1, 10));
        assert_eq!(to_f64(&tenth), 0.1);
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for s in ["0", "-3", "22/7", "-1/3"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
    }
}
