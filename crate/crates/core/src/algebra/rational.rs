//! Arbitrary-precision rationals, re-exported from `num-rational` with safe
//! parsing helpers.

use num_bigint::BigInt;
use num_traits::Zero;

use super::AlgebraError;

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` from machine integers. Panics if `d == 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"7"`, `"-3/2"` or `"0"` into a reduced rational.
///
/// Unlike `Rational::from_str` this never panics: a zero denominator is
/// reported as [`AlgebraError::ZeroDenominator`].
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let trimmed = text.trim();
    let bad = || AlgebraError::ParseRational(text.to_string());
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let numer: BigInt = num_text.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(AlgebraError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1));
        assert_eq!(parse_rational("-3/2").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rational(2, 3));
        assert_eq!(parse_rational("2/-4").unwrap(), rational(-1, 2));
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert_eq!(
            parse_rational("1/0"),
            Err(AlgebraError::ZeroDenominator("1/0".into()))
        );
        assert!(matches!(
            parse_rational("one half"),
            Err(AlgebraError::ParseRational(_))
        ));
        assert!(matches!(
            parse_rational("1/2/3"),
            Err(AlgebraError::ParseRational(_))
        ));
    }
}
