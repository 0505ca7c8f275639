//! Run manifests, number formatting and output writing.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Number, Value};

/// Environment variable overriding the manifest timestamp.
pub const EPOCH_VAR: &str = "SOURCE_DATE_EPOCH";

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: u64,
}

impl Manifest {
    pub fn new(command: &str, params: &impl Serialize, seed: Option<u64>) -> Self {
        let timestamp = std::env::var(EPOCH_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Manifest {
            command: command.to_string(),
            params: normalize(serde_json::to_value(params).expect("parameters serialize")),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

/// `x` with 17 significant digits, shortest layout (like C's `%.17g`).
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Re-render every non-integer number with [`fmt17`].
fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => n.as_f64().map_or(Value::Number(n), num),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt17(x).parse::<Number>().expect("valid JSON number"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// JSON document with the manifest as its first key.
pub fn document(manifest: &Manifest, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("manifest".into(), manifest.to_value());
    m.extend(body);
    Value::Object(m)
}

/// CSV text whose first line is `# manifest: {…}`.
pub fn csv_document(manifest: &Manifest, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("# manifest: {}\n", serde_json::to_string(&manifest.to_value()).expect("manifest"));
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Write to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(1.0), "1");
        assert_eq!(fmt17(49.0), "49");
        assert_eq!(fmt17(-2.5), "-2.5");
        assert_eq!(fmt17(1e-300), "1e-300");
        assert_eq!(fmt17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt17(1e20), "1e20");
        assert_eq!(fmt17(0.0), "0");
        for x in [0.1, 1.0 / 3.0, 123456.789, 6.02e23, 1e-7, -4.4e-12] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn numbers_keep_text() {
        assert_eq!(serde_json::to_string(&num(0.1)).unwrap(), "0.10000000000000001");
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
