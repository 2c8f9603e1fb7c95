//! Exact rational scalars.
//!
//! Everything symbolic in this crate is linear algebra over Q. The scalar
//! type is `num_rational::BigRational`, which keeps values in lowest terms
//! with a positive denominator and never rounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `n` or `n/d`, omitting a unit denominator.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "-3", "3/4" into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| Error::parse(0, format!("invalid integer {n:?}")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| Error::parse(0, format!("invalid integer {d:?}")))?;
    if denom.is_zero() {
        return Err(Error::domain("zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

/// Parses a positive decimal like "1e-30", "0.625" or "3/4" into an exact
/// rational. Used for error tolerances on the command line.
pub fn parse_positive_decimal(s: &str) -> Result<Rat> {
    let r = if s.contains('/') {
        parse_rat(s)?
    } else {
        let (mantissa, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| Error::parse(0, format!("invalid exponent {e:?}")))?;
                (m, exp)
            }
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits
            .parse()
            .map_err(|_| Error::parse(0, format!("invalid decimal {s:?}")))?;
        let scale = exp - frac_part.len() as i64;
        let ten = BigInt::from(10);
        if scale >= 0 {
            Rat::from_integer(numer * ten.pow(scale as u32))
        } else {
            Rat::new(numer, ten.pow((-scale) as u32))
        }
    };
    if !r.is_positive() {
        return Err(Error::domain(format!(
            "expected a positive value, got {s:?}"
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_positive_decimal("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_positive_decimal("0.625").unwrap(), rat(5, 8));
        assert_eq!(parse_positive_decimal("2.5e2").unwrap(), rat_int(250));
        assert_eq!(parse_positive_decimal("3/4").unwrap(), rat(3, 4));
        assert!(parse_positive_decimal("0").is_err());
        assert!(parse_positive_decimal("-1e-3").is_err());
        assert!(parse_positive_decimal("abc").is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert_eq!(fmt_rat(&rat(-2, 3)), "-2/3");
    }
}
