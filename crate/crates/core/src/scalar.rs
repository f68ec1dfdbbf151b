//! Exact scalar fields used by the geometric modules.
//!
//! Incidence and distance predicates are equality tests, so every geometric
//! type is generic over an exact field rather than a float. Any `Ratio<T>`
//! over a signed integer type qualifies: `Ratio<i64>` is fast for small
//! coordinates, [`crate::Rational`] never overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

use crate::error::{Error, Result};

/// An exact ordered field with a textual `p/q` representation.
pub trait ExactField: Clone + Num + Signed + Ord + Hash + Debug + Display + Send + Sync + 'static {
    fn from_i64(value: i64) -> Self;

    /// Parses `"p/q"` or `"p"`.
    fn parse_exact(text: &str) -> Result<Self>;

    /// Lossy conversion, for reporting only.
    fn approx_f64(&self) -> f64;
}

impl<T> ExactField for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + FromStr + From<i64> + Send + Sync + 'static,
    Ratio<T>: num_traits::ToPrimitive,
{
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(T::from(value))
    }

    fn parse_exact(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (num, den) = match trimmed.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (trimmed, "1"),
        };
        let num: T = num
            .parse()
            .map_err(|_| Error::input(format!("malformed rational {text:?}")))?;
        let den: T = den
            .parse()
            .map_err(|_| Error::input(format!("malformed rational {text:?}")))?;
        if den.is_zero() {
            return Err(Error::input(format!("zero denominator in {text:?}")));
        }
        Ok(Ratio::new(num, den))
    }

    fn approx_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Parses a decimal literal such as `"1.2"` or `"-0.25"` (or a `p/q` string)
/// into an exact big rational.
pub fn parse_decimal(text: &str) -> Result<Ratio<BigInt>> {
    let trimmed = text.trim();
    if trimmed.contains('/') || !trimmed.contains('.') {
        return Ratio::<BigInt>::parse_exact(trimmed);
    }
    let (int_part, frac_part) = trimmed.split_once('.').expect("checked above");
    if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::input(format!("malformed decimal {text:?}")));
    }
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    let mut num: BigInt = digits
        .parse()
        .map_err(|_| Error::input(format!("malformed decimal {text:?}")))?;
    if negative {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        let r = Ratio::<i64>::parse_exact(" 6/-4 ").unwrap();
        assert_eq!(r, Ratio::new(-3, 2));
        assert_eq!(Ratio::<i64>::parse_exact("7").unwrap(), Ratio::from_integer(7));
        assert!(Ratio::<i64>::parse_exact("1/0").is_err());
        assert!(Ratio::<i64>::parse_exact("x").is_err());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(
            parse_decimal("1.2").unwrap(),
            Ratio::new(BigInt::from(6), BigInt::from(5))
        );
        assert_eq!(
            parse_decimal("-0.25").unwrap(),
            Ratio::new(BigInt::from(-1), BigInt::from(4))
        );
        assert_eq!(parse_decimal("3").unwrap(), Ratio::from_integer(BigInt::from(3)));
        assert!(parse_decimal("1.").is_err());
    }
}
