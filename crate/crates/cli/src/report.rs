//! JSON building blocks and the aligned-table renderer.

use hnkit::bundle::PlainBundle;
use hnkit::parabolic::ParabolicIndex;
use hnkit::rootsys::CartanVector;
use hnkit::{fmt_q, Q};
use serde_json::{json, Value};

pub fn rational(q: &Q) -> Value {
    Value::String(fmt_q(q))
}

pub fn vector(v: &CartanVector) -> Value {
    Value::Array(v.coords().iter().map(rational).collect())
}

pub fn block(b: &PlainBundle) -> Value {
    Value::Array(b.atoms().iter().map(|a| Value::String(a.to_string())).collect())
}

pub fn parabolic(i: &ParabolicIndex) -> Value {
    json!(i.names())
}

/// A document with the command echo and the structured result.
pub fn document(command: &str, result: Value) -> Value {
    json!({ "command": command, "result": result })
}

pub fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Renders nested objects as indented `key  value` rows.
pub fn to_table(doc: &Value) -> String {
    let mut out = String::new();
    render(doc, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        render(val, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{i:>3}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{i:>3}\n"));
                        render(item, indent + 5, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
