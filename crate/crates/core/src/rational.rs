//! Exact rational helpers.
//!
//! Every bandwidth, weight and cut value in the crate is a [`Rational`], so
//! comparisons between closed forms and the flow-graph oracle are equalities.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer.
pub fn parse(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let parsed = match trimmed.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad(trimmed))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad(trimmed))?;
            if den.is_zero() {
                return Err(bad(trimmed));
            }
            Rational::new(num, den)
        }
        None => Rational::from_integer(trimmed.parse().map_err(|_| bad(trimmed))?),
    };
    Ok(parsed)
}

fn bad(text: &str) -> Error {
    Error::Parse(format!("not a rational: {text:?}"))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators: scale both down first.
        let num = value.numer().to_f64().unwrap_or(f64::NAN);
        let den = value.denom().to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// `"p/q"` (or `"p"` for integers).
pub fn to_fraction_string(value: &Rational) -> String {
    if value.is_integer() {
        format!("{}", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// `value · 10^places` rounded half away from zero, as a decimal string.
fn round_to_places(value: &Rational, places: usize) -> String {
    let scaled = value.abs() * Rational::from_integer(pow10(places as u32));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let digits = format!("{}", (scaled + half).floor().to_integer());
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if value.is_negative() && digits.bytes().any(|b| b != b'0') { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `floor(log10 |value|)` for nonzero `value`.
fn magnitude(value: &Rational) -> i32 {
    let a = value.abs();
    let mut m = libm::floor(libm::log10(libm::fabs(to_f64(value)))) as i32;
    let ten_pow = |e: i32| {
        if e >= 0 {
            Rational::from_integer(pow10(e as u32))
        } else {
            Rational::new(BigInt::one(), pow10((-e) as u32))
        }
    };
    while ten_pow(m) > a {
        m -= 1;
    }
    while ten_pow(m + 1) <= a {
        m += 1;
    }
    m
}

/// Decimal rendering with `sig` significant digits, rounded half away from
/// zero from the exact value, trailing zeros trimmed.
pub fn to_decimal_string(value: &Rational, sig: usize) -> String {
    if value.is_zero() {
        return String::from("0");
    }
    let decimals = (sig as i32 - 1 - magnitude(value)).max(0) as usize;
    let mut out = round_to_places(value, decimals);
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Decimal rendering with a fixed number of places after the point.
pub fn to_fixed_string(value: &Rational, places: usize) -> String {
    round_to_places(value, places)
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
