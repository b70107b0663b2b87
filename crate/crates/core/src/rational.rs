//! Exact rational helpers shared by every module.
//!
//! Costs are stored internally as integer multiples of `1 / scale`, where the
//! scale is the least common multiple of every input denominator. Reported
//! values go back through [`from_units`].

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = Ratio<i64>;

/// Sentinel for "no connection". Large enough to dominate any real cost while
/// still leaving headroom for a handful of additions.
pub const INF: i64 = i64::MAX / 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumberError {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("number `{0}` is out of range")]
    Overflow(String),
}

/// Parses `3`, `-2.25`, `0.125` or `7/3` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, NumberError> {
    let t = text.trim();
    let bad = || NumberError::Malformed(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| NumberError::Overflow(text.to_string()))?
    };
    let denom = 10i64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| NumberError::Overflow(text.to_string()))?;
    let value = Rational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Formats a rational as a terminating decimal when possible, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    let mut d = *value.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return value.numer().to_string();
    }
    let factor = 10i128.pow(places) / *value.denom() as i128;
    let scaled = *value.numer() as i128 * factor;
    let neg = scaled < 0;
    let abs = scaled.unsigned_abs();
    let pow = 10u128.pow(places);
    let mut frac = format!("{:0width$}", abs % pow, width = places as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    format!("{}{}.{}", if neg { "-" } else { "" }, abs / pow, frac)
}

/// Least common multiple of the denominators.
pub fn common_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, v| acc.lcm(v.denom()))
}

/// Converts `value` into integer units of `1/scale`. Panics if `scale` is not a
/// multiple of the denominator, which would be a bookkeeping bug.
pub fn to_units(value: &Rational, scale: i64) -> i64 {
    let scaled = *value * Rational::from_integer(scale);
    assert!(scaled.is_integer(), "scale {scale} does not absorb {value}");
    scaled.to_integer()
}

pub fn from_units(units: i64, scale: i64) -> Rational {
    Rational::new(units, scale)
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation with denominator at most `max_denom`
/// (continued fractions). Returns `None` when the approximation misses `x` by
/// more than `tol`.
pub fn rationalize(x: f64, max_denom: i64, tol: f64) -> Option<(i128, i128)> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let ax = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = ax;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a_int = a as i128;
        let p2 = a_int * p1 + p0;
        let q2 = a_int * q1 + q0;
        if q2 > max_denom as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let approx = p1 as f64 / q1 as f64;
        if (approx - ax).abs() <= tol {
            break;
        }
        let frac = r - a;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - ax).abs() > tol {
        return None;
    }
    Some((if neg { -p1 } else { p1 }, q1))
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("-2.25").unwrap(), Rational::new(-9, 4));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("7/3").unwrap(), Rational::new(7, 3));
        assert_eq!(parse_rational(".75").unwrap(), Rational::new(3, 4));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&Rational::new(1, 2)), "0.5");
        assert_eq!(format_rational(&Rational::new(-9, 4)), "-2.25");
        assert_eq!(format_rational(&Rational::from_integer(6)), "6");
        assert_eq!(format_rational(&Rational::new(1, 3)), "1/3");
        assert_eq!(format_rational(&Rational::new(3, 40)), "0.075");
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.5, 1000, 1e-12), Some((1, 2)));
        assert_eq!(rationalize(-1.0 / 3.0, 1000, 1e-12), Some((-1, 3)));
        assert_eq!(rationalize(4.0, 1000, 1e-12), Some((4, 1)));
        assert_eq!(rationalize(std::f64::consts::PI, 100, 1e-12), None);
    }

    #[test]
    fn units_round_trip() {
        let vals = [Rational::new(1, 2), Rational::new(3, 4), Rational::from_integer(2)];
        let scale = common_scale(vals.iter());
        assert_eq!(scale, 4);
        for v in &vals {
            assert_eq!(from_units(to_units(v, scale), scale), *v);
        }
    }
}
