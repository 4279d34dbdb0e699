//! Arbitrary-precision scalars and truncated-series values.
//!
//! Exact work uses [`rug::Rational`] directly (always canonical). Real-valued
//! work uses [`BigReal`], a thin wrapper over an MPFR float whose precision is
//! chosen from a decimal [`Precision`] plus guard digits.

mod combinat;
mod constants;

pub use combinat::{binomial, compositions, double_factorial, euler_numbers, Compositions};
pub use constants::{beta_odd, ln2_const, pi_const, zeta_bar_int, zeta_int};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number in canonical form.
pub type ExactRational = Rational;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 10;
    pub const GUARD_DIGITS: u32 = 10;
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::domain(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision used for arithmetic, including guard digits.
    pub fn bits(self) -> u32 {
        let d = f64::from(self.digits + Self::GUARD_DIGITS);
        (d * std::f64::consts::LOG2_10).ceil() as u32
    }

    /// 2^-bits, the relative size of one rounding step.
    pub fn unit_roundoff(self) -> BigReal {
        let mut f = Float::with_val(self.bits(), 1);
        f >>= self.bits();
        BigReal(f)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Real number carried at an explicit binary precision.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero(prec: Precision) -> Self {
        BigReal(Float::new(prec.bits()))
    }

    pub fn from_int(v: i64, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), v))
    }

    pub fn from_integer(v: &Integer, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), v))
    }

    pub fn from_rational(v: &Rational, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), v))
    }

    pub fn from_f64(v: f64, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), v))
    }

    /// Parses a decimal literal such as `0.5`, `-1e-3` or `1/3`.
    pub fn parse(text: &str, prec: Precision) -> Result<Self> {
        let t = text.trim();
        if t.contains('/') {
            let q: Rational = t
                .parse()
                .map_err(|_| Error::parse(0, format!("invalid rational `{t}`")))?;
            return Ok(Self::from_rational(&q, prec));
        }
        let parsed = Float::parse(t).map_err(|_| Error::parse(0, format!("invalid number `{t}`")))?;
        Ok(BigReal(Float::with_val(prec.bits(), parsed)))
    }

    pub fn from_float(f: Float) -> Self {
        BigReal(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn cos(&self) -> Self {
        BigReal(self.0.clone().cos())
    }

    pub fn sin(&self) -> Self {
        BigReal(self.0.clone().sin())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn powi(&self, e: i32) -> Self {
        BigReal(self.0.clone().pow(e))
    }

    pub fn mul_int(&self, v: i64) -> Self {
        BigReal(Float::with_val(self.bits(), &self.0 * v))
    }

    pub fn div_int(&self, v: i64) -> Self {
        BigReal(Float::with_val(self.bits(), &self.0 / v))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let rounded = Float::with_val(self.bits(), &self.0);
        let s = rounded.to_string_radix_round(10, Some(digits.max(1) as usize), Round::Nearest);
        tidy_decimal(&s)
    }

    /// Compact rendering for error indicators: four significant digits,
    /// rounded away from zero so that the printed bound stays a bound.
    pub fn to_bound_string(&self) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let s = self.0.to_string_radix_round(10, Some(4), Round::Up);
        tidy_decimal(&s)
    }
}

/// Normalises MPFR output: plain notation for moderate exponents and no
/// trailing zeros in the mantissa.
fn tidy_decimal(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(pos) => (&body[..pos], &body[pos + 1..]),
        None => (body, ""),
    };
    let mut digits: String = format!("{int_part}{frac_part}");
    let mut point = int_part.len() as i64 + exp;
    let lead = digits.len() - digits.trim_start_matches('0').len();
    if lead == digits.len() {
        return "0".to_string();
    }
    digits.drain(..lead);
    point -= lead as i64;
    let trimmed = digits.trim_end_matches('0').to_string();
    let sign = if neg { "-" } else { "" };
    let n = trimmed.len() as i64;
    if !(-20..=40).contains(&point) {
        let (first, rest) = trimmed.split_at(1);
        let frac = if rest.is_empty() {
            String::new()
        } else {
            format!(".{rest}")
        };
        return format!("{sign}{first}{frac}e{}", point - 1);
    }
    if point <= 0 {
        format!("{sign}0.{}{}", "0".repeat((-point) as usize), trimmed)
    } else if point >= n {
        format!("{sign}{}{}", trimmed, "0".repeat((point - n) as usize))
    } else {
        let (a, b) = trimmed.split_at(point as usize);
        format!("{sign}{a}.{b}")
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20) as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! bigreal_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let bits = self.bits().max(rhs.bits());
                BigReal(Float::with_val(bits, &self.0 $op &rhs.0))
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

bigreal_binop!(Add, add, +);
bigreal_binop!(Sub, sub, -);
bigreal_binop!(Mul, mul, *);
bigreal_binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(Float::with_val(self.bits(), -&self.0))
    }
}

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(mut iter: I) -> BigReal {
        let first = match iter.next() {
            Some(v) => v,
            None => return BigReal(Float::new(64)),
        };
        iter.fold(first, |acc, x| acc + x)
    }
}

/// Whether an error indicator is backed by a proved inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

impl BoundKind {
    /// Rigorous only if both inputs are.
    pub fn and(self, other: BoundKind) -> BoundKind {
        if self == BoundKind::Rigorous && other == BoundKind::Rigorous {
            BoundKind::Rigorous
        } else {
            BoundKind::Heuristic
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Rigorous => "rigorous",
            BoundKind::Heuristic => "heuristic",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Estimate of an infinite quantity together with an error indicator.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedValue {
    pub estimate: BigReal,
    pub error_indicator: BigReal,
    pub terms_used: u64,
    pub bound_kind: BoundKind,
}

impl TruncatedValue {
    /// A value known up to rounding only.
    pub fn exact(estimate: BigReal, prec: Precision) -> Self {
        let err = estimate.abs() * prec.unit_roundoff().mul_int(4);
        TruncatedValue {
            estimate,
            error_indicator: err,
            terms_used: 1,
            bound_kind: BoundKind::Rigorous,
        }
    }

    pub fn lower(&self) -> BigReal {
        &self.estimate - &self.error_indicator
    }

    pub fn upper(&self) -> BigReal {
        &self.estimate + &self.error_indicator
    }

    /// |self − other|.
    pub fn distance(&self, other: &BigReal) -> BigReal {
        (&self.estimate - other).abs()
    }

    /// True when `x` lies in the closed interval estimate ± error.
    pub fn contains(&self, x: &BigReal) -> bool {
        self.distance(x) <= self.error_indicator
    }

    /// Multiplies by an exactly known constant.
    pub fn scale(&self, factor: &BigReal) -> Self {
        TruncatedValue {
            estimate: &self.estimate * factor,
            error_indicator: &self.error_indicator * &factor.abs(),
            terms_used: self.terms_used,
            bound_kind: self.bound_kind,
        }
    }

    /// Sum of two independent estimates; errors add.
    pub fn add(&self, other: &TruncatedValue) -> Self {
        TruncatedValue {
            estimate: &self.estimate + &other.estimate,
            error_indicator: &self.error_indicator + &other.error_indicator,
            terms_used: self.terms_used.max(other.terms_used),
            bound_kind: self.bound_kind.and(other.bound_kind),
        }
    }

    /// Product of two estimates with the first-order-plus-cross error term.
    pub fn mul(&self, other: &TruncatedValue) -> Self {
        let e = &(&self.estimate.abs() * &other.error_indicator)
            + &(&other.estimate.abs() * &self.error_indicator);
        let e = &e + &(&self.error_indicator * &other.error_indicator);
        TruncatedValue {
            estimate: &self.estimate * &other.estimate,
            error_indicator: e,
            terms_used: self.terms_used.max(other.terms_used),
            bound_kind: self.bound_kind.and(other.bound_kind),
        }
    }
}

impl Serialize for TruncatedValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = digits_for_bits(self.estimate.bits());
        let mut st = serializer.serialize_struct("TruncatedValue", 4)?;
        st.serialize_field("estimate", &self.estimate.to_decimal(digits))?;
        st.serialize_field("error_indicator", &self.error_indicator.to_bound_string())?;
        st.serialize_field("terms_used", &self.terms_used)?;
        st.serialize_field("bound_kind", &self.bound_kind)?;
        st.end()
    }
}

/// Number of decimal digits that a float of `bits` carries after removing
/// the guard digits.
pub(crate) fn digits_for_bits(bits: u32) -> u32 {
    let d = (f64::from(bits) / std::f64::consts::LOG2_10).floor() as u32;
    d.saturating_sub(Precision::GUARD_DIGITS).max(Precision::MIN_DIGITS)
}

/// Canonical "p/q" rendering used for every serialized rational.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses "p/q", an integer, or a terminating decimal such as "-0.25" exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(0, format!("`{t}` is not a rational number"));
    if t.contains('/') {
        return t.parse::<Rational>().map_err(|_| bad());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: Integer = digits.parse().map_err(|_| bad())?;
    let denom = Integer::from(10).pow(frac_part.len() as u32);
    let q = Rational::from((numer, denom));
    Ok(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::from((-1, 4)));
        assert_eq!(parse_rational("3").unwrap(), 3);
        assert_eq!(parse_rational(".5").unwrap(), Rational::from((1, 2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5e3").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(9).is_err());
        assert_eq!(Precision::new(10).unwrap().digits(), 10);
        assert!(Precision::DEFAULT.bits() >= 199);
    }

    #[test]
    fn decimal_rendering() {
        let p = Precision::new(20).unwrap();
        let third = BigReal::from_rational(&Rational::from((1, 3)), p);
        assert_eq!(third.to_decimal(5), "0.33333");
        assert_eq!(BigReal::from_int(-120, p).to_decimal(10), "-120");
        assert_eq!(BigReal::from_f64(2.5e-7, p).to_decimal(3), "0.00000025");
        assert_eq!(BigReal::from_f64(1.0e-30, p).to_decimal(3), "1e-30");
        assert_eq!(BigReal::zero(p).to_decimal(5), "0");
    }

    #[test]
    fn bound_string_rounds_up() {
        let p = Precision::new(20).unwrap();
        let v = BigReal::from_rational(&Rational::from((1, 3)), p);
        assert_eq!(v.to_bound_string(), "0.3334");
    }

    #[test]
    fn parse_accepts_fractions() {
        let p = Precision::new(20).unwrap();
        let half = BigReal::parse("1/2", p).unwrap();
        assert_eq!(half, 0.5);
        assert_eq!(BigReal::parse(" -0.25 ", p).unwrap(), -0.25);
        assert!(BigReal::parse("abc", p).is_err());
    }

    #[test]
    fn truncated_arithmetic() {
        let p = Precision::new(20).unwrap();
        let a = TruncatedValue {
            estimate: BigReal::from_int(2, p),
            error_indicator: BigReal::from_f64(0.5, p),
            terms_used: 10,
            bound_kind: BoundKind::Rigorous,
        };
        let b = TruncatedValue {
            estimate: BigReal::from_int(3, p),
            error_indicator: BigReal::from_f64(0.25, p),
            terms_used: 20,
            bound_kind: BoundKind::Heuristic,
        };
        let s = a.add(&b);
        assert_eq!(s.estimate, 5.0);
        assert_eq!(s.error_indicator, 0.75);
        assert_eq!(s.bound_kind, BoundKind::Heuristic);
        let m = a.mul(&b);
        assert_eq!(m.estimate, 6.0);
        assert_eq!(m.error_indicator, 2.0 * 0.25 + 3.0 * 0.5 + 0.125);
        assert!(a.contains(&BigReal::from_f64(2.5, p)));
        assert!(!a.contains(&BigReal::from_f64(2.6, p)));
    }

    #[test]
    fn rational_rendering_is_canonical() {
        assert_eq!(rational_string(&Rational::from((6, -4))), "-3/2");
        assert_eq!(rational_string(&Rational::from(5)), "5/1");
    }
}
