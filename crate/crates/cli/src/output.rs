use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::config::Format;
use crate::Failure;

/// A report with an optional dedicated CSV rendering.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report { json, csv: None }
    }

    pub fn with_csv(json: Value, csv: String) -> Self {
        Report {
            json,
            csv: Some(csv),
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub code: u8,
}

impl Outcome {
    pub fn ok(report: Report) -> Self {
        Outcome { report, code: 0 }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => {
            let _ = writeln!(out, "{},{}", csv_field(prefix), csv_field(s));
        }
        other => {
            let _ = writeln!(out, "{},{}", csv_field(prefix), other);
        }
    }
}

/// `key,value` rows over the leaves of a JSON document.
pub fn flat_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    flatten("", v, &mut out);
    out
}

pub fn render(report: &Report, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json)
                .map_err(|e| Failure::invalid(format!("serialization failed: {e}")))?;
            s.push('\n');
            s
        }
        Format::Csv => report.csv.clone().unwrap_or_else(|| flat_csv(&report.json)),
    })
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), Failure> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
