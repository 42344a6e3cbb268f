//! Reports are `serde_json` trees with sorted keys, rendered either as JSON
//! or as an indented text listing.

use std::fmt::Write as _;

use minkowski_core::linalg::Matrix;
use minkowski_core::IndexSet;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            match v {
                Value::Object(map) => {
                    for (k, x) in map {
                        write_entry(&mut out, 0, k, x);
                    }
                }
                other => {
                    out.push_str(&scalar(other));
                    out.push('\n');
                }
            }
            out
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Array(xs) if xs.iter().all(is_scalar) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            Some(format!("[{}]", items.join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        v if is_scalar(v) => Some(scalar(v)),
        _ => None,
    }
}

fn write_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        writeln!(out, "{pad}{key}: {s}").expect("write to string");
        return;
    }
    writeln!(out, "{pad}{key}:").expect("write to string");
    write_block(out, depth + 1, v);
}

fn write_block(out: &mut String, depth: usize, v: &Value) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                write_entry(out, depth, k, x);
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").expect("write to string"),
                    None => {
                        writeln!(out, "{pad}-").expect("write to string");
                        write_block(out, depth + 1, x);
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other)).expect("write to string"),
    }
}

pub fn set(s: IndexSet) -> Value {
    Value::String(s.to_string())
}

pub fn sets(xs: impl IntoIterator<Item = IndexSet>) -> Value {
    Value::Array(xs.into_iter().map(set).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                json!(cells.join(" "))
            })
            .collect(),
    )
}

pub fn verdict(ok: bool) -> Value {
    json!(if ok { "PASS" } else { "FAIL" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let v = json!({
            "b": [1, 2],
            "a": {"x": null, "y": [{"k": "v"}]},
            "c": "{0,1}",
        });
        assert_eq!(
            render(&v, Format::Text),
            "a:\n  x: none\n  y:\n    -\n      k: v\nb: [1, 2]\nc: {0,1}\n"
        );
    }
}
