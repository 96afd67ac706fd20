//! Scalar backends.
//!
//! Every computation in this crate is generic over [`Scalar`], which is
//! implemented for `f64` and for arbitrary-precision rationals
//! ([`Rational`]). Rational arithmetic is exact, so identities can be checked
//! for equality; the float backend compares through a
//! [`Tolerance`](crate::Tolerance).

use std::fmt::{Debug, Display};

use num::{BigInt, BigRational, FromPrimitive, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number used by the exact backend.
pub type Rational = BigRational;

/// Which backend a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl ArithmeticMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ArithmeticMode::Exact => "exact",
            ArithmeticMode::Float => "float",
        }
    }
}

/// An element of an ordered field.
pub trait Scalar: Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static {
    /// `true` when ring operations are exact and equality is decidable.
    const EXACT: bool;
    const MODE: ArithmeticMode;

    fn from_i64(n: i64) -> Self;

    /// `n / d`; panics when `d == 0`.
    fn ratio(n: i64, d: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Converts a finite double. For rationals the conversion is exact.
    fn from_f64(x: f64) -> Option<Self>;

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: ArithmeticMode = ArithmeticMode::Exact;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(x)
    }
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"` into an exact
/// rational. Decimals are read digit by digit, so `"0.1"` is exactly `1/10`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Largest absolute value over a slice; zero for an empty slice.
pub fn max_abs<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| S::max_of(acc, v.abs()))
}
