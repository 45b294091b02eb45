//! Exact rational scalars.
//!
//! Every probability, valuation, allocation share, utility and revenue in this
//! crate is a [`Rational`]. Floating point only appears when a value is
//! rendered for humans (see [`to_decimal`]).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Significant digits used by every decimal rendering in reports and CSV.
pub const DECIMAL_DIGITS: usize = 12;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `max(value, 0)`.
pub fn positive_part(value: Rational) -> Rational {
    if value.is_negative() {
        Rational::zero()
    } else {
        value
    }
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal literal `{0}` not accepted; write it as num/den or enable decimal input")]
    DecimalNotAllowed(String),
}

/// Parses `"num/den"`, `"num"`, or (when `allow_decimal`) a terminating
/// decimal such as `"1.25"`. The result is always exact.
pub fn parse_rational(text: &str, allow_decimal: bool) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = parse_integer(num).ok_or_else(malformed)?;
        let den: BigInt = parse_integer(den).ok_or_else(malformed)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if !allow_decimal {
            return Err(ParseRationalError::DecimalNotAllowed(text.to_string()));
        }
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let digits = format!("{}{}", whole_digits, frac);
        let magnitude: BigInt = digits.parse().map_err(|_| malformed())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    parse_integer(text).map(Rational::from_integer).ok_or_else(malformed)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let text = text.trim();
    let digits = text.trim_start_matches(['-', '+']);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) || text.len() - digits.len() > 1 {
        return None;
    }
    text.parse().ok()
}

/// Canonical `"num/den"` form used by JSON and CSV (integers keep `/1`).
pub fn to_ratio_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Renders `value` rounded (half away from zero) to `digits` significant
/// digits in plain positional notation, trailing zeros trimmed.
pub fn to_decimal_digits(value: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= magnitude < 10^(e+1)
    let mut exponent = magnitude.numer().to_string().len() as i64 - magnitude.denom().to_string().len() as i64;
    loop {
        let lower = pow10(exponent);
        if magnitude < lower {
            exponent -= 1;
            continue;
        }
        if magnitude >= pow10(exponent + 1) {
            exponent += 1;
            continue;
        }
        break;
    }

    let shift = digits as i64 - 1 - exponent;
    let scaled = &magnitude * pow10(shift);
    let (quotient, remainder) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if remainder * 2 >= *scaled.denom() { quotient + 1 } else { quotient };
    let mut shift = shift;
    if mantissa == num_traits::pow(ten.clone(), digits) {
        mantissa /= &ten;
        shift -= 1;
    }

    let mut text = mantissa.to_string();
    let rendered = if shift <= 0 {
        text.extend(std::iter::repeat_n('0', (-shift) as usize));
        text
    } else {
        let shift = shift as usize;
        if text.len() <= shift {
            let zeros = "0".repeat(shift - text.len());
            text = format!("0.{zeros}{text}");
        } else {
            text.insert(text.len() - shift, '.');
        }
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    };
    if negative {
        format!("-{rendered}")
    } else {
        rendered
    }
}

/// [`to_decimal_digits`] at the crate-wide [`DECIMAL_DIGITS`].
pub fn to_decimal(value: &Rational) -> String {
    to_decimal_digits(value, DECIMAL_DIGITS)
}

fn pow10(exp: i64) -> Rational {
    let base = BigInt::from(10);
    if exp >= 0 {
        Rational::from_integer(num_traits::pow(base, exp as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(base, (-exp) as usize))
    }
}

/// Display adapter printing `exact (decimal)`, e.g. `25/8 (3.125)`.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.0, to_decimal(self.0))
    }
}

/// Serde adapter storing a rational as its `"num/den"` string.
pub mod ratio_str {
    use super::{parse_rational, to_ratio_string, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&to_ratio_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text, false).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for sequences of rationals.
pub mod ratio_str_seq {
    use super::{parse_rational, to_ratio_string, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for value in values {
            seq.serialize_element(&to_ratio_string(value))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|text| parse_rational(text, false).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2", false).unwrap(), rat(1, 2));
        assert_eq!(parse_rational("10/4", false).unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-3", false).unwrap(), int(-3));
        assert_eq!(parse_rational(" 5/3 ", false).unwrap(), rat(5, 3));
    }

    #[test]
    fn rejects_bad_literals() {
        assert_eq!(parse_rational("", false), Err(ParseRationalError::Empty));
        assert!(matches!(parse_rational("1/0", false), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!(parse_rational("abc", false), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("1/2/3", false), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("--1", false), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("0.5", false), Err(ParseRationalError::DecimalNotAllowed(_))));
    }

    #[test]
    fn decimals_parse_exactly_when_allowed() {
        assert_eq!(parse_rational("0.5", true).unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.25", true).unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("3.000", true).unwrap(), int(3));
        assert!(parse_rational("1.", true).is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(25, 8)), "3.125");
        assert_eq!(to_decimal(&rat(51, 16)), "3.1875");
        assert_eq!(to_decimal(&rat(1, 3)), "0.333333333333");
        assert_eq!(to_decimal(&rat(2, 3)), "0.666666666667");
        assert_eq!(to_decimal(&int(0)), "0");
        assert_eq!(to_decimal(&int(-7)), "-7");
        assert_eq!(to_decimal(&rat(1, 4096)), "0.000244140625");
        assert_eq!(to_decimal(&int(123_456_789_012_345)), "123456789012000");
        assert_eq!(to_decimal_digits(&rat(999_999, 1_000_000), 3), "1");
        assert_eq!(to_decimal_digits(&rat(-1, 200), 2), "-0.005");
    }

    #[test]
    fn ratio_strings_keep_unit_denominators() {
        assert_eq!(to_ratio_string(&int(3)), "3/1");
        assert_eq!(to_ratio_string(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn helpers() {
        assert_eq!(positive_part(rat(-1, 2)), int(0));
        assert_eq!(positive_part(rat(1, 2)), rat(1, 2));
        assert_eq!(pow(&rat(1, 2), 4), rat(1, 16));
        assert_eq!(pow(&rat(2, 3), 0), int(1));
    }
}
