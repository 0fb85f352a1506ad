//! Stable decimal rendering shared by DOT, JSON, CSV and matrix-file output.

use alloc::format;
use alloc::string::{String, ToString};

use num_rational::BigRational;

/// Significant digits used for every decimal the crate renders.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Renders `x` like C's `%.{digits}g`: shortest of fixed or scientific notation, with
/// trailing zeros removed. Negative zero renders as `0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exponent)
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// [`format_sig`] at [`SIGNIFICANT_DIGITS`].
pub fn format_decimal(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format_decimal(x).parse().unwrap_or(x)
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
