//! Number formatting for CLI output and JSON documents.

use serde_json::{Number, Value};

/// Decimal with 17 significant digits, enough to round-trip any `f64`.
pub fn round_trip_decimal(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON number carrying exactly [`round_trip_decimal`]; `null` if not finite.
pub fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = round_trip_decimal(x)
        .parse()
        .expect("scientific notation is valid JSON");
    Value::Number(n)
}

/// A grid exponent: finite values as numbers, infinities as `"inf"` / `"-inf"`.
pub fn json_exponent(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        json_number(x)
    }
}

/// `printf("%.15g")`: 15 significant digits, trailing zeros trimmed.
pub fn significant15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (14 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
