//! Extended-precision real arithmetic shared by every other module.
//!
//! Reals are MPFR floats ([`rug::Float`]). A [`PrecisionContext`] fixes the
//! working precision in *decimal* significant digits, derives the binary
//! precision from it, and carries the threshold below which a value is treated
//! as zero. Contexts are plain values: there is no global precision state.

use std::cmp::Ordering;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

/// A real scalar carried at some [`PrecisionContext`]'s binary precision.
pub type BigReal = Float;

/// Coarsest precision any reconstruction is run at.
pub const MIN_DECIMAL_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("precision of {0} decimal digits is below the minimum of {MIN_DECIMAL_DIGITS}")]
    PrecisionTooLow(u32),
    #[error("guard digits ({guard}) must be fewer than the decimal digits ({digits})")]
    GuardTooLarge { digits: u32, guard: u32 },
    #[error("malformed decimal literal {0:?}")]
    MalformedDecimal(String),
}

/// Working precision for one task.
///
/// `zero_threshold` is `10^-(decimal_digits - guard_digits)`: the guard digits
/// absorb rounding noise, and anything smaller than the threshold is noise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
    bits: u32,
}

/// Builds a context, rejecting precisions too coarse for any reconstruction.
pub fn make_context(decimal_digits: u32, guard_digits: u32) -> Result<PrecisionContext, ArithError> {
    PrecisionContext::new(decimal_digits, guard_digits)
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32, guard_digits: u32) -> Result<Self, ArithError> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(ArithError::PrecisionTooLow(decimal_digits));
        }
        if guard_digits >= decimal_digits {
            return Err(ArithError::GuardTooLarge {
                digits: decimal_digits,
                guard: guard_digits,
            });
        }
        Ok(PrecisionContext {
            decimal_digits,
            guard_digits,
            bits: bits_for_digits(decimal_digits),
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary precision of every [`BigReal`] created through this context.
    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// `k` such that the zero threshold is `10^-k`.
    pub fn threshold_exponent(&self) -> u32 {
        self.decimal_digits - self.guard_digits
    }

    /// The zero threshold as an exact rational.
    pub fn zero_threshold_exact(&self) -> Rational {
        Rational::from((1, Integer::from(10).pow(self.threshold_exponent())))
    }

    /// The zero threshold rounded to working precision.
    pub fn zero_threshold(&self) -> BigReal {
        self.real(&self.zero_threshold_exact())
    }

    /// True when `|x|` is below the zero threshold.
    pub fn is_negligible(&self, x: &Float) -> bool {
        x.is_zero() || x.clone().abs() < self.zero_threshold()
    }

    /// Same guard digits, `extra` more significant digits.
    pub fn widened(&self, extra: u32) -> PrecisionContext {
        PrecisionContext {
            decimal_digits: self.decimal_digits + extra,
            guard_digits: self.guard_digits,
            bits: bits_for_digits(self.decimal_digits + extra),
        }
    }

    /// Twice the significant digits (used by the brute-force oracles).
    pub fn doubled(&self) -> PrecisionContext {
        self.widened(self.decimal_digits)
    }

    pub fn real<T>(&self, value: T) -> BigReal
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, value)
    }

    pub fn zero(&self) -> BigReal {
        Float::new(self.bits)
    }

    pub fn from_rational(&self, q: &Rational) -> BigReal {
        Float::with_val(self.bits, q)
    }

    pub fn from_integer(&self, n: &Integer) -> BigReal {
        Float::with_val(self.bits, n)
    }

    /// `10^e`, correctly rounded.
    pub fn pow10(&self, e: i32) -> BigReal {
        let ten = Integer::from(10).pow(e.unsigned_abs());
        if e >= 0 {
            self.from_integer(&ten)
        } else {
            self.from_rational(&Rational::from((1, ten)))
        }
    }

    pub fn sqrt(&self, x: &Float) -> BigReal {
        Float::with_val(self.bits, x.sqrt_ref())
    }

    pub fn pi(&self) -> BigReal {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} digits ({} guard, {} bits)",
            self.decimal_digits, self.guard_digits, self.bits
        )
    }
}

/// Binary precision carrying at least `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32 + 8
}

/// Parses a finite decimal literal to the exact rational it denotes.
///
/// Accepts an optional sign, digits with at most one `.`, and an optional
/// `e`/`E` exponent. No binary rounding happens anywhere.
pub fn parse_decimal(text: &str) -> Result<Rational, ArithError> {
    let malformed = || ArithError::MalformedDecimal(text.to_string());
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let digits = exp_text.strip_prefix(['+', '-']).unwrap_or(exp_text);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let exp: i64 = exp_text.parse().map_err(|_| malformed())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let numerator = Integer::from_str_radix(&digits, 10).map_err(|_| malformed())?;
    let scale = exponent - frac_part.len() as i64;
    let scale_u32 = u32::try_from(scale.unsigned_abs()).map_err(|_| malformed())?;
    let power = Integer::from(10).pow(scale_u32);
    let mut value = if scale >= 0 {
        Rational::from(numerator * power)
    } else {
        Rational::from((numerator, power))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact decimal rendering of `q`, or `None` when its expansion does not
/// terminate (denominator has a prime factor other than 2 and 5).
pub fn format_decimal(q: &Rational) -> Option<String> {
    let mut den = q.denom().clone();
    let mut twos = 0u32;
    while den.is_divisible_u(2) {
        den /= 2;
        twos += 1;
    }
    let mut fives = 0u32;
    while den.is_divisible_u(5) {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (q.numer() * Integer::from(10).pow(places)) / q.denom();
    let negative = scaled < 0;
    let mut digits = scaled.abs().to_string();
    if places == 0 {
        return Some(if negative { format!("-{digits}") } else { digits });
    }
    let places = places as usize;
    if digits.len() <= places {
        digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
    }
    let split = digits.len() - places;
    let sign = if negative { "-" } else { "" };
    Some(format!("{sign}{}.{}", &digits[..split], &digits[split..]))
}

/// Scientific rendering with `digits` significant digits, e.g. `1.02e-8`.
pub fn format_scientific(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    // rug renders as "d.ddde±x"; drop the exponent when it is zero.
    match s.strip_suffix("e0") {
        Some(stripped) => stripped.to_string(),
        None => s,
    }
}

/// Fixed-point rendering of `x` with `places` digits after the point.
pub fn format_fixed(x: &Float, places: u32) -> String {
    let q = match x.to_rational() {
        Some(q) => q,
        None => return x.to_string(),
    };
    let scale = Integer::from(10).pow(places);
    let scaled = Rational::from(&q * &scale);
    let rounded = scaled.round();
    let approx = Rational::from((rounded.numer().clone(), scale));
    format_decimal(&approx).unwrap_or_else(|| x.to_string())
}

/// Smallest integer `>= x`, except that values within `10^-tolerance_digits`
/// (relative) of an integer snap to that integer. Guards formula values that
/// are mathematically integral against rounding noise.
pub fn ceil_snapped(x: &Float, tolerance_digits: i32) -> Integer {
    let nearest = x.clone().round();
    let gap = Float::with_val(x.prec(), x - &nearest).abs();
    let scale = Float::with_val(x.prec(), x.abs_ref()).max(&Float::with_val(x.prec(), 1));
    let tol = scale / pow10_float(x.prec(), tolerance_digits);
    let snapped = if gap <= tol { nearest } else { x.clone().ceil() };
    snapped.to_integer().expect("finite value")
}

fn pow10_float(prec: u32, e: i32) -> Float {
    let ten = Integer::from(10).pow(e.unsigned_abs());
    if e >= 0 {
        Float::with_val(prec, ten)
    } else {
        Float::with_val(prec, Rational::from((1, ten)))
    }
}

/// Total order on finite floats, for `sort_by`/`max_by`.
pub fn cmp_finite(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).expect("comparison of finite values")
}
