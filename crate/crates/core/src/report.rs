//! Byte-stable rendering of report values.
//!
//! All JSON emitted by the tools goes through [`render_json`], which prints
//! every floating-point number with exactly six decimal places and sorts
//! object keys (the underlying map is ordered), so repeated runs of a
//! deterministic command produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::{io_err, Result};

/// Renders a JSON value with fixed-precision floats (six decimals), two
/// space indentation, and a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

/// Renders `value` via [`render_json`] and writes it to `path`.
pub fn write_json_file(path: &Path, value: &Value) -> Result<()> {
    fs::write(path, render_json(value)).map_err(|e| io_err(path, e))
}

/// Writes already-rendered text (e.g. CSV) to `path`.
pub fn write_text_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let _ = write!(out, "{:.6}", n.as_f64().unwrap_or(f64::NAN));
            }
        }
        Value::String(s) => {
            out.push_str(&Value::String(s.clone()).to_string());
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_render_with_six_decimals() {
        let v = json!({ "nda": 0.0432, "count": 7, "flag": true });
        let text = render_json(&v);
        assert!(text.contains("\"nda\": 0.043200"), "{text}");
        assert!(text.contains("\"count\": 7"), "{text}");
        assert!(text.contains("\"flag\": true"), "{text}");
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn keys_are_sorted_and_output_is_stable() {
        let v = json!({ "zebra": 1, "apple": 2 });
        let a = render_json(&v);
        let b = render_json(&v);
        assert_eq!(a, b);
        assert!(a.find("apple").unwrap() < a.find("zebra").unwrap());
    }

    #[test]
    fn nested_structures_and_empty_containers() {
        let v = json!({ "rows": [], "meta": {}, "list": [0.5, 1.0] });
        let text = render_json(&v);
        assert!(text.contains("\"rows\": []"));
        assert!(text.contains("\"meta\": {}"));
        assert!(text.contains("0.500000"));
        assert!(text.contains("1.000000"));
    }

    #[test]
    fn strings_are_escaped() {
        let v = json!({ "id": "a\"b" });
        assert!(render_json(&v).contains(r#""a\"b""#));
    }
}
