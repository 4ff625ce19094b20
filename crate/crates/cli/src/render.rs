//! Plain-text rendering: one `path = value` line per leaf of the report.

use serde_json::Value;

const MAX_ITEMS: usize = 16;

pub fn text(report: &Value) -> String {
    let mut out = format!(
        "heisenrig {} {}: {}\n",
        report["command"].as_str().unwrap_or("?"),
        report["version"].as_str().unwrap_or("?"),
        report["status"].as_str().unwrap_or("?"),
    );
    walk("config", &report["config"], &mut out);
    walk("result", &report["result"], &mut out);
    out
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| !v.is_object() && !v.is_array())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn walk(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                walk(&format!("{path}.{k}"), child, out);
            }
        }
        Value::Array(items) if is_flat(items) => {
            let shown: Vec<String> = items.iter().take(MAX_ITEMS).map(scalar).collect();
            let more = if items.len() > MAX_ITEMS { format!(", ... ({} items)", items.len()) } else { String::new() };
            out.push_str(&format!("{path} = [{}{more}]\n", shown.join(", ")));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{path} = []\n"));
            }
            for (i, child) in items.iter().take(MAX_ITEMS).enumerate() {
                walk(&format!("{path}[{i}]"), child, out);
            }
            if items.len() > MAX_ITEMS {
                out.push_str(&format!("{path} = ... ({} items)\n", items.len()));
            }
        }
        other => out.push_str(&format!("{path} = {}\n", scalar(other))),
    }
}
