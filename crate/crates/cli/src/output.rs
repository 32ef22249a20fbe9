//! Result envelopes and their JSON and table renderings.

use serde_json::{json, Map, Value};
use toric_mle::model::BirchResidual;
use toric_mle::rational::{format_float, format_rational, Rational};

use crate::args::Format;
use crate::error::CliError;

/// A float with 17 significant digits; non-finite values become strings.
pub fn float(x: f64) -> Value {
    let s = format_float(x);
    if x.is_finite() {
        serde_json::from_str(&s).expect("formatted float is a JSON number")
    } else {
        Value::String(s)
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn exact(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn exacts(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(exact).collect())
}

pub fn residual(r: &BirchResidual) -> Value {
    json!({ "sum": float(r.sum), "sufficient": float(r.sufficient), "generators": float(r.generators) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Success {
    pub payload: Value,
    pub diagnostics: Value,
}

impl Success {
    pub fn new(payload: Value) -> Self {
        Success { payload, diagnostics: Value::Object(Map::new()) }
    }

    pub fn with(payload: Value, diagnostics: Value) -> Self {
        Success { payload, diagnostics }
    }
}

pub fn ok_envelope(s: &Success) -> Value {
    json!({ "status": "ok", "payload": s.payload, "diagnostics": s.diagnostics })
}

pub fn error_envelope(e: &CliError, payload: Option<&Value>) -> Value {
    let mut v = json!({ "status": "error", "code": e.code(), "message": e.to_string() });
    if let Some(p) = payload {
        v["payload"] = p.clone();
    }
    v
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            table(v, "", &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let row: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}\t{}\n", row.join("\t")));
        }
        Value::Array(items) if items.iter().all(Value::is_object) => {
            let mut cols: Vec<String> = Vec::new();
            for it in items {
                for k in it.as_object().expect("object").keys() {
                    if !cols.contains(k) {
                        cols.push(k.clone());
                    }
                }
            }
            out.push_str(&format!("{prefix}\n{}\n", cols.join("\t")));
            for it in items {
                let row: Vec<String> = cols
                    .iter()
                    .map(|c| match it.get(c) {
                        Some(x) if is_scalar(x) => scalar(x),
                        Some(Value::Array(a)) if a.iter().all(is_scalar) => {
                            a.iter().map(scalar).collect::<Vec<_>>().join(" ")
                        }
                        Some(x) => x.to_string(),
                        None => "-".into(),
                    })
                    .collect();
                out.push_str(&format!("{}\n", row.join("\t")));
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}\t{}\n", scalar(other))),
    }
}
