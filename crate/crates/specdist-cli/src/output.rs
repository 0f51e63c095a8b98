//! Shared rendering helpers: number formatting, CSV quoting, and JSON
//! values that survive infinities.
//!
//! Human mode prints 6 significant digits; CSV and JSON carry full double
//! precision. Infinity appears as the string `inf` in human and CSV output
//! and as the tagged object `{"tag": "inf"}` in JSON (plain JSON numbers
//! cannot encode it).

use serde_json::{json, Value};

/// Render with 6 significant digits: fixed-point in a moderate range,
/// scientific outside it, `inf` for infinities.
pub fn fmt6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=14).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Full-precision rendering for CSV: shortest round-trip form, `inf` for
/// infinities.
pub fn fmt_full(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

/// JSON value for a real number; infinities become tagged objects.
pub fn json_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!({ "tag": "nan" })
    } else if x > 0.0 {
        json!({ "tag": "inf" })
    } else {
        json!({ "tag": "-inf" })
    }
}

/// JSON array of real numbers via [`json_real`].
pub fn json_reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_real(x)).collect())
}

/// Quote a CSV field when it contains a delimiter, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CSV line from pre-rendered fields, with quoting.
pub fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// Pretty-printed JSON document with a trailing newline.
pub fn json_doc(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("report values always serialize");
    text.push('\n');
    text
}
