//! Deterministic number formatting for CSV output.

use crate::real::{to_f64, Real};

/// Formats a value in fixed decimal notation with six significant digits,
/// a `.` decimal separator, and no exponent. Non-finite values render as
/// `inf`, `-inf`, or `nan`. Output is byte-identical across runs and
/// platforms for equal inputs.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if mag > 5 {
        // All significant digits sit left of the decimal point; round the
        // integer to six significant digits.
        let scale = 10f64.powi(mag - 5);
        return format!("{:.0}", (x / scale).round() * scale);
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// [`fmt_sig6`] over any scalar the crate works with.
pub fn fmt_scalar<R: Real>(x: R) -> String {
    fmt_sig6(to_f64(x))
}
