//! Locale-independent number formatting for CSV and text output.

/// Formats `v` with `precision` significant digits (6..=17).
///
/// The value is first rounded to `precision` digits, then printed in its
/// shortest round-trip form. Magnitudes below `1e-4` or at least `1e16` use
/// scientific notation. At precision 17 every binary64 value survives a
/// print/parse round trip exactly.
pub fn fmt_num(v: f64, precision: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let rounded = if precision >= 17 {
        v
    } else {
        format!("{:.*e}", precision.saturating_sub(1), v)
            .parse::<f64>()
            .unwrap_or(v)
    };
    let mag = rounded.abs();
    if rounded != 0.0 && !(1e-4..1e16).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// Fixed two-decimal pixel coordinate.
pub fn fmt_px(v: f64) -> String {
    format!("{v:.2}")
}
