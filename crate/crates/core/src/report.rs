//! Deterministic JSON output with a fixed float format.

use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::numeric::format_sig17;

fn fix_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                return;
            }
            if let Some(x) = n.as_f64() {
                let text = format_sig17(x);
                if let Ok(fixed) = text.parse::<Number>() {
                    *n = fixed;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(fix_floats),
        Value::Object(map) => map.values_mut().for_each(fix_floats),
        _ => {}
    }
}

/// Converts `value` to a JSON tree whose floats carry 17 significant digits.
pub fn to_value<T: Serialize + ?Sized>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    fix_floats(&mut v);
    Ok(v)
}

/// Pretty JSON with 17 significant digits per float and a trailing newline.
/// Field order follows declaration order, so equal inputs give equal bytes.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        count: usize,
        x: f64,
        ys: Vec<f64>,
        missing: Option<f64>,
        label: &'static str,
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let s = to_json(&Sample {
            count: 3,
            x: 0.1,
            ys: vec![1.0, -2.5e-300],
            missing: None,
            label: "a",
        })
        .unwrap();
        assert!(s.contains("\"count\": 3"), "{s}");
        assert!(s.contains("\"x\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("1.0000000000000000e+0"), "{s}");
        assert!(s.contains("-2.5000000000000000e-300"), "{s}");
        assert!(s.contains("\"missing\": null"), "{s}");
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn output_is_stable() {
        let a = to_json(&vec![0.2, 0.3]).unwrap();
        let b = to_json(&vec![0.2, 0.3]).unwrap();
        assert_eq!(a, b);
    }
}
