//! Report envelope, hex-float mirrors and file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: Option<bool>,
    pub checks: usize,
    pub failed: Vec<String>,
}

impl Summary {
    pub fn none() -> Self {
        Self { passed: None, checks: 0, failed: Vec::new() }
    }

    pub fn from_checks<'a>(checks: impl IntoIterator<Item = (&'a str, bool)>) -> Self {
        let mut n = 0;
        let mut failed = Vec::new();
        for (name, ok) in checks {
            n += 1;
            if !ok {
                failed.push(name.to_string());
            }
        }
        Self { passed: Some(failed.is_empty()), checks: n, failed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub results: Value,
    /// `results` with every non-integer number replaced by its hex-float spelling.
    pub results_hex: Value,
    pub summary: Summary,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>, config: RunConfig, results: Value, summary: Summary, timing_ms: f64) -> Self {
        let results_hex = hex_mirror(&results);
        Self { command, config, results, results_hex, summary, timing_ms }
    }

    /// The report without its timing, which is the reproducible part.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut v {
            m.remove("timing_ms");
        }
        v
    }
}

/// `0x1.8p+1` style spelling of an `f64`, exact and round-trippable.
pub fn hex_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x == 0.0 {
        return format!("{sign}0x0p+0");
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let mut digits = format!("{mant:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    if digits.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{e:+}")
    }
}

pub fn parse_hex_float(s: &str) -> Option<f64> {
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let v = match rest {
        "nan" => f64::NAN,
        "inf" => f64::INFINITY,
        _ => {
            let body = rest.strip_prefix("0x")?;
            let (mant, exp) = body.split_once('p')?;
            let exp: i32 = exp.parse().ok()?;
            let (lead, frac) = mant.split_once('.').unwrap_or((mant, ""));
            let lead: u64 = lead.parse().ok()?;
            let mut m = lead as f64;
            let mut scale = 1.0 / 16.0;
            for c in frac.chars() {
                m += f64::from(c.to_digit(16)?) * scale;
                scale /= 16.0;
            }
            m * 2f64.powi(exp)
        }
    };
    Some(if neg { -v } else { v })
}

pub fn hex_mirror(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => Value::String(hex_float(n.as_f64().unwrap_or(f64::NAN))),
        Value::Array(a) => Value::Array(a.iter().map(hex_mirror).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), hex_mirror(v))).collect::<Map<_, _>>()),
        other => other.clone(),
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Full-precision CSV cell.
pub fn csv_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_opt(x: Option<f64>) -> String {
    x.map(csv_f64).unwrap_or_default()
}
