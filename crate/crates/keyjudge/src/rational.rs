//! Exact rational plumbing shared by the scorer and the analytics layer.
//!
//! Scores, thresholds, percentages, and correlation values all live in
//! `Ratio<i64>`. The magnitudes involved are tiny (counts of responses,
//! hundredths for threshold grids), so `i64` leaves orders of magnitude of
//! headroom before any overflow concern.

use num_rational::Ratio;
use num_traits::Signed;
use thiserror::Error;

/// Exact rational number used for every score and statistic in this crate.
pub type Rational = Ratio<i64>;

/// Error from [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {literal:?}")]
    Malformed { literal: String },
    #[error("zero denominator in {literal:?}")]
    ZeroDenominator { literal: String },
}

/// Parses a rational literal in either `m/k` or plain decimal form.
///
/// `1/4`, `0.25`, `1`, and `.25` all parse; exponents and signs other than a
/// single leading `-` do not. Decimal forms are converted exactly (digits over
/// a power of ten), never through a float.
pub fn parse_rational(literal: &str) -> Result<Rational, ParseRationalError> {
    let s = literal.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed {
        literal: literal.to_string(),
    };

    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| malformed())?;
        let d: i64 = den.trim().parse().map_err(|_| malformed())?;
        if d == 0 {
            return Err(ParseRationalError::ZeroDenominator {
                literal: literal.to_string(),
            });
        }
        return Ok(Rational::new(n, d));
    }

    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(malformed());
    }
    // 10^18 overflows nothing here; reject literals beyond that scale outright.
    if int_part.len() > 18 || frac_part.len() > 18 {
        return Err(malformed());
    }
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| malformed())?
    };
    let frac_val: i64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| malformed())?
    };
    let scale = 10i64.pow(frac_part.len() as u32);
    let magnitude = Rational::new(
        int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(malformed)?,
        scale,
    );
    Ok(if negative { -magnitude } else { magnitude })
}

/// Renders `value` in fixed-point decimal with exactly `decimals` fractional
/// digits, rounding half away from zero. Used everywhere a report column calls
/// for a decimal rendering of an exact rational.
pub fn format_fixed(value: Rational, decimals: u32) -> String {
    let scale = 10i64.pow(decimals);
    let scaled = value.abs() * Rational::from_integer(scale);
    // Half-up on the absolute value: floor(x + 1/2).
    let rounded = (scaled + Rational::new(1, 2)).floor().to_integer();
    let sign = if value.is_negative() && rounded != 0 {
        "-"
    } else {
        ""
    };
    if decimals == 0 {
        return format!("{sign}{rounded}");
    }
    let whole = rounded / scale;
    let frac = rounded % scale;
    format!(
        "{sign}{whole}.{frac:0width$}",
        width = decimals as usize
    )
}

/// Renders `value` as a reduced fraction: `1/4`, `-2/3`, or a bare integer
/// when the denominator reduces to one.
pub fn format_fraction(value: Rational) -> String {
    if value.denom() == &1 {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// True when `value` lies in the closed unit interval.
pub fn in_unit_interval(value: Rational) -> bool {
    !value.is_negative() && value <= Rational::from_integer(1)
}
