use serde_json::Value;

use crate::Format;

/// One line of compact JSON, or `key: value` lines with dotted paths.
pub fn emit(format: Format, v: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string(v).expect("values serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            flatten("", v, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::Array(_) | Value::Object(_) => None,
                _ => scalar(x),
            })
            .collect::<Option<Vec<_>>>()
            .map(|parts| format!("[{}]", parts.join(" "))),
        Value::Object(_) => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{prefix}: {s}\n"));
        return;
    }
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(fields) => fields.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        _ => unreachable!("scalars handled above"),
    }
}
