//! Exact rational helpers.
//!
//! Game quantities are kept as scaled integers internally and surfaced as
//! [`Rational`] values. Decimal input goes through [`rust_decimal`].

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rust_decimal::Decimal;

use crate::error::{Error, Result};

/// Exact rational number used across the public API.
pub type Rational = Ratio<i128>;

/// Largest number of decimal digits accepted for weights and beliefs.
pub const MAX_DECIMAL_DIGITS: u32 = 9;

/// `10^k` as an `i128`.
pub fn pow10(k: u32) -> i128 {
    10i128.pow(k)
}

/// Splits a decimal into `(mantissa, scale)` with trailing zeros removed.
pub fn decimal_parts(d: Decimal) -> (i128, u32) {
    let d = d.normalize();
    (d.mantissa(), d.scale())
}

/// Parses a decimal string exactly.
pub fn parse_decimal(s: &str) -> Result<Decimal> {
    s.trim()
        .parse::<Decimal>()
        .map_err(|e| Error::InvalidArgument(format!("not a decimal number {s:?}: {e}")))
}

/// Exact conversion of a decimal to a rational.
pub fn decimal_to_rational(d: Decimal) -> Rational {
    let (m, s) = decimal_parts(d);
    Rational::new(m, pow10(s))
}

/// Renders a rational as a decimal string when it has a terminating expansion.
pub fn rational_to_decimal(r: &Rational) -> Option<Decimal> {
    let mut den = *r.denom();
    let mut scale = 0u32;
    // den must be of the form 2^a 5^b
    let mut probe = den;
    while probe % 2 == 0 {
        probe /= 2;
    }
    while probe % 5 == 0 {
        probe /= 5;
    }
    if probe != 1 {
        return None;
    }
    let mut num = *r.numer();
    while den != 1 {
        let g = den.gcd(&10);
        num *= 10 / g;
        den /= g;
        scale += 1;
        if scale > 28 {
            return None;
        }
    }
    Decimal::try_from_i128_with_scale(num, scale)
        .ok()
        .map(|d| d.normalize())
}

/// `"num/den"` rendering used in every report.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Least common multiple of positive values.
pub(crate) fn lcm(a: i128, b: i128) -> i128 {
    a.abs().lcm(&b.abs())
}

pub(crate) fn is_between_01(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::from_integer(1)
}
