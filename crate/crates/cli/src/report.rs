//! Reports: one structure rendered as text, JSON or CSV.

use arithdyn::places::{Field, HeightKind};
use serde_json::{json, Map, Value};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Effective settings, echoed into every report.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub field: Field,
    pub height: HeightKind,
    pub quad_tol: f64,
    pub steps: usize,
    pub window: usize,
    pub bit_budget: u64,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    fn to_json(&self) -> Value {
        json!({
            "field": self.field.as_str(),
            "e": self.field.transcendence_degree().to_string(),
            "height": self.height.as_str(),
            "quad_tol": sci(self.quad_tol),
            "n": self.steps.to_string(),
            "window": self.window.to_string(),
            "bit_budget": self.bit_budget.to_string(),
            "seed": self.seed.to_string(),
            "format": self.format.as_str(),
        })
    }
}

/// Fixed-point decimal string.
pub fn num(x: f64) -> Value {
    Value::String(dec(x))
}

pub fn dec(x: f64) -> String {
    if x.is_finite() {
        // no "-0.000000000000"
        let x = if x.abs() < 5e-13 { 0.0 } else { x };
        format!("{x:.12}")
    } else {
        x.to_string()
    }
}

/// Scientific notation for tolerances and error bounds.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

/// One row of a height sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqRow {
    pub n: usize,
    pub h: f64,
    pub h_plus: f64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub diagnostics: Vec<String>,
    pub error_bounds: Map<String, Value>,
    pub sequence: Option<Vec<SeqRow>>,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Report {
            command: command.to_string(),
            config,
            inputs: Map::new(),
            results: Map::new(),
            diagnostics: Vec::new(),
            error_bounds: Map::new(),
            sequence: None,
        }
    }

    pub fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.into(), s(v));
    }

    pub fn result(&mut self, k: &str, v: Value) {
        self.results.insert(k.into(), v);
    }

    pub fn bound(&mut self, k: &str, v: f64) {
        self.error_bounds.insert(k.into(), s(sci(v)));
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    fn rows_json(&self) -> Option<Value> {
        self.sequence.as_ref().map(|rows| {
            Value::Array(
                seq_columns(rows)
                    .into_iter()
                    .map(|r| json!({"n": r[0], "h": r[1], "h_plus": r[2], "root": r[3], "ratio": r[4]}))
                    .collect(),
            )
        })
    }

    pub fn to_json(&self) -> Value {
        let mut results = self.results.clone();
        if let Some(rows) = self.rows_json() {
            results.insert("sequence".into(), rows);
        }
        json!({
            "config": self.config.to_json(),
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(results),
            "diagnostics": self.diagnostics,
            "error_bounds": Value::Object(self.error_bounds.clone()),
        })
    }

    pub fn to_csv(&self) -> Option<String> {
        let rows = self.sequence.as_ref()?;
        let mut out = String::from("n,h,h_plus,root,ratio\n");
        for r in seq_columns(rows) {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        Some(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "{}", self.command);
        let _ = writeln!(
            out,
            "config: field={} e={} height={} quad_tol={} n={} window={} bit_budget={} seed={}",
            c.field.as_str(),
            c.field.transcendence_degree(),
            c.height.as_str(),
            sci(c.quad_tol),
            c.steps,
            c.window,
            c.bit_budget,
            c.seed
        );
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "{k}: {}", scalar(v));
        }
        for (k, v) in &self.results {
            write_value(&mut out, k, v, 0);
        }
        if let Some(rows) = &self.sequence {
            let _ = writeln!(out, "sequence:");
            let _ = writeln!(out, "  {:>4}  {:>20}  {:>20}  {:>16}  {:>16}", "n", "h", "h_plus", "root", "ratio");
            for r in seq_columns(rows) {
                let _ = writeln!(out, "  {:>4}  {:>20}  {:>20}  {:>16}  {:>16}", r[0], r[1], r[2], r[3], r[4]);
            }
        }
        for (k, v) in &self.error_bounds {
            let _ = writeln!(out, "error bound {k}: {}", scalar(v));
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "note: {d}");
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv().unwrap_or_else(|| self.to_text()),
            Format::Text => self.to_text(),
        }
    }
}

/// `n, h, h_plus, h⁺ₙ^{1/n}, h⁺ₙ/h⁺ₙ₋₁` as strings; the last two are empty when undefined.
fn seq_columns(rows: &[SeqRow]) -> Vec<[String; 5]> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let root = if r.n > 0 { dec(r.h_plus.powf(1.0 / r.n as f64)) } else { String::new() };
            let ratio = match i.checked_sub(1).map(|j| &rows[j]) {
                Some(p) if p.n + 1 == r.n => dec(r.h_plus / p.h_plus),
                _ => String::new(),
            };
            [r.n.to_string(), dec(r.h), dec(r.h_plus), root, ratio]
        })
        .collect()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "none".into(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(scalar).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, k: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            let _ = writeln!(out, "{pad}{k}:");
            for (k2, v2) in m {
                write_value(out, k2, v2, depth + 1);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            let _ = writeln!(out, "{pad}{k}:");
            for x in a {
                let line = match x {
                    Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join("  "),
                    other => scalar(other),
                };
                let _ = writeln!(out, "{pad}  - {line}");
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{k}: {}", scalar(v));
        }
    }
}
