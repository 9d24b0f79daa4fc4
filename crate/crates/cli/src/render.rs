use std::fmt::Write;

use serde_json::{Map, Value};

/// Plain-text form of a report: one `key: value` line per field, nested
/// objects indented, list items prefixed with `-`.
pub fn text(doc: &Map<String, Value>) -> String {
    let mut out = String::new();
    object(&mut out, doc, 0);
    out
}

fn object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        match (inline(v), v) {
            (Some(s), _) => {
                let _ = writeln!(out, "{pad}{k}: {s}");
            }
            (None, Value::Object(inner)) => {
                let _ = writeln!(out, "{pad}{k}:");
                object(out, inner, indent + 2);
            }
            (None, Value::Array(items)) => {
                let _ = writeln!(out, "{pad}{k}:");
                for item in items {
                    list_item(out, item, indent + 2);
                }
            }
            (None, _) => unreachable!("scalars are always inline"),
        }
    }
}

fn list_item(out: &mut String, item: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match (inline(item), item) {
        (Some(s), _) => {
            let _ = writeln!(out, "{pad}- {s}");
        }
        (None, Value::Object(m)) if m.values().all(|v| inline(v).is_some()) => {
            let fields: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {}", inline(v).unwrap())).collect();
            let _ = writeln!(out, "{pad}- {}", fields.join(", "));
        }
        (None, Value::Object(m)) => {
            let _ = writeln!(out, "{pad}-");
            object(out, m, indent + 2);
        }
        (None, _) => {
            let _ = writeln!(out, "{pad}-");
            if let Value::Array(items) = item {
                for i in items {
                    list_item(out, i, indent + 2);
                }
            }
        }
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}
