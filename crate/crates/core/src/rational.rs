//! Exact rational helpers: parsing, decimal rendering, integer scaling and
//! the `{num, den}` JSON encoding used by reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default number of fractional digits for decimal renderings.
pub const DEFAULT_PRECISION: usize = 6;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `-3`, `1/2`, `-9024/4096` or a terminating decimal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Renders `value` rounded half-to-even at `digits` fractional digits, with
/// trailing zeros trimmed (`-3/2` renders as `-1.5`).
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let magnitude = value.abs();
    let scaled = magnitude.numer() * &scale;
    let (mut quotient, remainder) = scaled.div_rem(magnitude.denom());
    let twice: BigInt = &remainder * 2u32;
    match twice.cmp(magnitude.denom()) {
        std::cmp::Ordering::Greater => quotient += 1,
        std::cmp::Ordering::Equal if quotient.is_odd() => quotient += 1,
        _ => {}
    }
    if quotient.is_zero() {
        return "0".into();
    }
    let (int_part, frac_part) = quotient.div_rem(&scale);
    let sign = if value.is_negative() { "-" } else { "" };
    let mut out = format!("{sign}{int_part}");
    if digits > 0 && !frac_part.is_zero() {
        let frac = format!("{:0>width$}", frac_part.to_string(), width = digits);
        out.push('.');
        out.push_str(frac.trim_end_matches('0'));
    }
    out
}

/// Renders `num/den` without reducing, or just `num` when `den == 1`.
pub fn fraction_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Couplings rescaled to a common integer grid: `value[k] = numerators[k] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerScaled {
    pub numerators: Vec<i64>,
    pub denominator: i64,
}

impl IntegerScaled {
    pub fn to_rational(&self, scaled: i64) -> Rational {
        ratio(scaled, self.denominator)
    }
}

/// Scales `values` by the lcm of their denominators. Returns `None` when the
/// result would not leave room for sums of `headroom` terms in an `i64`.
pub fn scale_to_integers(values: &[Rational], headroom: usize) -> Option<IntegerScaled> {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    let limit = i64::MAX / (headroom.max(1) as i64 + 1);
    let denominator = lcm.to_i64()?;
    let numerators = values
        .iter()
        .map(|v| {
            let n = (v.numer() * (&lcm / v.denom())).to_i64()?;
            (n.checked_abs()? <= limit).then_some(n)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(IntegerScaled {
        numerators,
        denominator,
    })
}

/// JSON encoding of a rational as `{"num": .., "den": ..}` in lowest terms.
/// Components that do not fit an `i64` are emitted as decimal strings.
pub struct Fraction<'a>(pub &'a Rational);

impl Serialize for Fraction<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Fraction", 2)?;
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.0.numer().to_string())?;
                st.serialize_field("den", &self.0.denom().to_string())?;
            }
        }
        st.end()
    }
}

/// `serialize_with` adapter for `Rational` fields.
pub fn serialize_fraction<S: Serializer>(
    value: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    Fraction(value).serialize(serializer)
}

pub fn serialize_opt_fraction<S: Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.serialize_some(&Fraction(v)),
        None => serializer.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-1").unwrap(), integer(-1));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-9024/4096").unwrap(), ratio(-141, 64));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-2.203125").unwrap(), ratio(-141, 64));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(-3, 2), 6), "-1.5");
        assert_eq!(to_decimal(&ratio(-9024, 4096), 6), "-2.203125");
        assert_eq!(to_decimal(&ratio(17, 64), 6), "0.265625");
        assert_eq!(to_decimal(&integer(-2), 6), "-2");
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&ratio(-1, 1_000_000_000), 6), "0");
    }

    #[test]
    fn half_even_ties() {
        // 2.5 -> 2, 3.5 -> 4, -2.203125 at 5 digits -> -2.20312
        assert_eq!(to_decimal(&ratio(5, 2), 0), "2");
        assert_eq!(to_decimal(&ratio(7, 2), 0), "4");
        assert_eq!(to_decimal(&ratio(-141, 64), 5), "-2.20312");
        assert_eq!(to_decimal(&ratio(-141, 64), 3), "-2.203");
        assert_eq!(to_decimal(&ratio(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&ratio(3, 8), 2), "0.38");
    }

    #[test]
    fn unreduced_and_integer_fraction_strings() {
        assert_eq!(fraction_string(&ratio(-3, 2)), "-3/2");
        assert_eq!(fraction_string(&integer(-2)), "-2");
    }

    #[test]
    fn integer_scaling() {
        let v = vec![ratio(1, 2), ratio(-1, 3), integer(2)];
        let s = scale_to_integers(&v, 10).unwrap();
        assert_eq!(s.denominator, 6);
        assert_eq!(s.numerators, vec![3, -2, 12]);
        let huge = vec![Rational::from_integer(BigInt::from(i64::MAX))];
        assert!(scale_to_integers(&huge, 4).is_none());
    }

    #[test]
    fn fraction_json() {
        let json = serde_json::to_string(&Fraction(&ratio(-9024, 4096))).unwrap();
        assert_eq!(json, r#"{"num":-141,"den":64}"#);
    }
}
