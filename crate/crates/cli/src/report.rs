use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::doc::{Loaded, REPORT_SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize)]
struct InputInfo {
    path: String,
    schema: String,
    digest: String,
}

/// The outcome of one command. `lines` is the text rendering; `results`
/// holds the same facts for the JSON rendering.
#[derive(Clone, Debug)]
pub struct Report {
    operation: String,
    inputs: Vec<InputInfo>,
    pass: bool,
    witness: Option<String>,
    results: Map<String, Value>,
    lines: Vec<String>,
}

/// 64-bit FNV-1a of the raw input bytes, as hex.
fn digest(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

impl Report {
    pub fn new(operation: &str, inputs: &[&Loaded]) -> Self {
        Report {
            operation: operation.into(),
            inputs: inputs
                .iter()
                .map(|l| InputInfo {
                    path: l.path.display().to_string(),
                    schema: l.doc.schema().to_string(),
                    digest: digest(&l.bytes),
                })
                .collect(),
            pass: true,
            witness: None,
            results: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Marks the report failed; the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.pass = false;
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    /// Records a named check, failing the report when it does not hold.
    pub fn check(&mut self, name: &str, ok: bool) {
        self.line(format!("{name}: {}", if ok { "ok" } else { "FAILED" }));
        self.results
            .entry("checks")
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .expect("checks is an object")
            .insert(name.into(), Value::Bool(ok));
        if !ok {
            self.fail(format!("{name} does not hold"));
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({
                    "schema": REPORT_SCHEMA,
                    "operation": self.operation,
                    "inputs": self.inputs,
                    "verdict": if self.pass { "pass" } else { "fail" },
                    "witness": self.witness,
                    "results": self.results,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "operation: {}", self.operation);
                for i in &self.inputs {
                    let _ = writeln!(s, "input: {} ({}, {})", i.path, i.schema, i.digest);
                }
                for l in &self.lines {
                    let _ = writeln!(s, "{l}");
                }
                let _ = writeln!(s, "verdict: {}", if self.pass { "PASS" } else { "FAIL" });
                if let Some(w) = &self.witness {
                    let _ = writeln!(s, "witness: {w}");
                }
                s
            }
        }
    }
}
