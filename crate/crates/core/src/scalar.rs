//! Numeric backends: exact rationals and `f64`.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers used by the rational mode.
pub type Rational = BigRational;

/// Arithmetic needed by kernels and distributions.
///
/// Comparisons take a tolerance; exact types ignore it.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn is_negative(&self) -> bool;
    fn parse_str(s: &str) -> Result<Self>;
    fn from_json(v: &serde_json::Value) -> Result<Self>;
    fn to_json(&self) -> serde_json::Value;

    fn from_usize(v: usize) -> Self {
        Self::from_ratio(v as i64, 1)
    }

    fn abs_diff_f64(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).to_f64().abs()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
            if q == 0.0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(p / q);
        }
        s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => {
                n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))
            }
            serde_json::Value::String(s) => Self::parse_str(s),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(self.to_string()))
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal (with optional exponent)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("0{int}{frac}")).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    /// Exact value of the shortest decimal that round-trips to `v`.
    fn from_f64(v: f64) -> Self {
        parse_rational(&format!("{v:e}")).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn parse_str(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            // a JSON float is read through its shortest decimal form
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            serde_json::Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
