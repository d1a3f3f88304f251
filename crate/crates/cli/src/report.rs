use serde::Serialize;
use serde_json::{Map, Number, Value};

use qcstar::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

/// Rounds to 12 significant digits so that reports are stable across
/// platforms and runs.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// The JSON document for a report: its fields (or `{key: value}` for
/// non-object values) plus the schema tag.
pub fn document(body: &impl Serialize, key: &str) -> anyhow::Result<Value> {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    match round_floats(serde_json::to_value(body)?) {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert(key.into(), other);
        }
    }
    Ok(Value::Object(map))
}

pub fn print_json(body: &impl Serialize, key: &str) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(&document(body, key)?)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.1234567890123456), 0.123456789012);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(-2.5e-17), -2.5e-17);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn documents_carry_the_schema() {
        let doc = document(&serde_json::json!({"x": 0.1234567890123456}), "v").unwrap();
        assert_eq!(doc["schema"], SCHEMA);
        assert_eq!(doc["x"], 0.123456789012);
        let doc = document(&vec![1, 2], "items").unwrap();
        assert_eq!(doc["items"], serde_json::json!([1, 2]));
    }
}
