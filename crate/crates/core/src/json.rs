//! Exact decimal values in JSON documents.
//!
//! Decimals are written either as JSON numbers carrying the exact decimal
//! text (when the serializer preserves number text) or as JSON strings.
//! Both forms are accepted on input.

use std::str::FromStr;

use rust_decimal::Decimal;
use serde_json::Value;

/// How decimal fields are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecimalStyle {
    #[default]
    Number,
    String,
}

/// Reads a decimal from a JSON number or string without going through
/// binary floating point.
pub fn decimal_from_value(value: &Value) -> Option<Decimal> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_owned(),
        _ => return None,
    };
    parse_decimal(&text)
}

pub fn parse_decimal(text: &str) -> Option<Decimal> {
    Decimal::from_str(text)
        .or_else(|_| Decimal::from_scientific(text))
        .ok()
}

/// Writes `d` in the requested style. Number output keeps the decimal text
/// verbatim, e.g. `0.65` or `100.00`.
pub fn decimal_to_value(d: Decimal, style: DecimalStyle) -> Value {
    match style {
        DecimalStyle::String => Value::String(d.to_string()),
        DecimalStyle::Number => {
            let text = d.to_string();
            match serde_json::Number::from_str(&text) {
                Ok(n) if n.to_string() == text => Value::Number(n),
                // serializer would lose digits
                _ => Value::String(text),
            }
        }
    }
}
