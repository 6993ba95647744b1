//! Exact rational parsing and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

/// Parses `"1e-9"`, `"0.001"`, `"3/7"` or `"42"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32 - 1;
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(pow10(scale.unsigned_abs()));
    } else {
        r /= BigRational::from_integer(pow10(scale.unsigned_abs()));
    }
    Ok(if neg { -r } else { r })
}

/// `x` rounded to `digits` significant decimal digits, half away from zero.
pub fn to_significant(x: &BigRational, digits: u32) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    // Exponent e with 10^e <= a < 10^(e+1).
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten_pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while a < ten_pow(e) {
        e -= 1;
    }
    while a >= ten_pow(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * ten_pow(shift);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut m = if BigInt::from(2) * r >= *scaled.denom() { q + 1 } else { q };
    let mut shift = shift;
    if m == pow10(digits) {
        m /= 10;
        shift -= 1;
    }
    let s = m.to_string();
    let body = if shift <= 0 {
        format!("{s}{}", "0".repeat((-shift) as usize))
    } else if (shift as usize) < s.len() {
        let split = s.len() - shift as usize;
        format!("{}.{}", &s[..split], &s[split..])
    } else {
        format!("0.{}{s}", "0".repeat(shift as usize - s.len()))
    };
    format!("{sign}{body}")
}

/// Shortest exact decimal if the denominator is `2^a 5^b`, otherwise `p/q`.
pub fn to_exact_string(x: &BigRational) -> String {
    let mut d = x.denom().clone();
    let mut places = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    places += twos.max(fives);
    if places == 0 {
        return x.numer().to_string();
    }
    let scaled = x * BigRational::from_integer(pow10(places));
    let n = scaled.to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let s = format!("{:0>width$}", n.abs().to_string(), width = places as usize + 1);
    let split = s.len() - places as usize;
    format!("{sign}{}.{}", &s[..split], &s[split..])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("1e-9").unwrap(), q(1, 1_000_000_000));
        assert_eq!(parse_rational("0.001").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E1").unwrap(), q(25, 1));
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("42").unwrap(), q(42, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        for bad in ["", "e5", "1/0", "abc", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(to_significant(&q(179_442_719_099, 10_000_000_000), 10), "17.94427191");
        assert_eq!(to_significant(&q(1, 3), 3), "0.333");
        assert_eq!(to_significant(&q(-2, 3), 2), "-0.67");
        assert_eq!(to_significant(&q(9999, 1000), 2), "10");
        assert_eq!(to_significant(&q(123_456, 1), 3), "123000");
        assert_eq!(to_significant(&q(1, 2000), 2), "0.00050");
        assert_eq!(to_significant(&q(0, 1), 5), "0");
    }

    #[test]
    fn exact_strings() {
        assert_eq!(to_exact_string(&q(1, 8)), "0.125");
        assert_eq!(to_exact_string(&q(-3, 20)), "-0.15");
        assert_eq!(to_exact_string(&q(7, 1)), "7");
        assert_eq!(to_exact_string(&q(1, 3)), "1/3");
    }
}
