//! The JSON lattice file, DOT export, and the JSON report envelope.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// On-disk shape: `{"name": ..., "size": n, "covers": [[a, b], ...]}` with
/// `a ⋖ b`, ids 0-based. `name` is optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

impl LatticeFile {
    pub fn from_lattice(lattice: &Lattice, name: Option<&str>) -> LatticeFile {
        LatticeFile {
            name: name.map(str::to_string),
            size: lattice.size(),
            covers: lattice.covers().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        Lattice::from_covers(self.size, &covers).map_err(|e| Error::Validation(Box::new(e)))
    }
}

pub fn parse_lattice_file(text: &str) -> Result<Lattice> {
    parse_named_lattice_file(text).map(|(_, l)| l)
}

pub fn parse_named_lattice_file(text: &str) -> Result<(Option<String>, Lattice)> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let lattice = file.to_lattice()?;
    Ok((file.name, lattice))
}

/// Single-line JSON with covers in sorted order, newline-terminated.
pub fn write_lattice_file(lattice: &Lattice, name: Option<&str>) -> String {
    let mut text = serde_json::to_string(&LatticeFile::from_lattice(lattice, name))
        .expect("lattice file serializes");
    text.push('\n');
    text
}

/// Hasse diagram in DOT: nodes grouped into one rank per height, cover edges
/// pointing upward.
pub fn export_dot(lattice: &Lattice, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    let max_height = lattice.height(lattice.top());
    for h in 0..=max_height {
        let members: Vec<String> = lattice
            .elements()
            .filter(|&x| lattice.height(x) == h)
            .map(|x| format!("n{x}"))
            .collect();
        if !members.is_empty() {
            let _ = writeln!(out, "  {{ rank=same; {}; }}", members.join("; "));
        }
    }
    for x in lattice.elements() {
        let label = labels
            .and_then(|l| l.get(x))
            .cloned()
            .unwrap_or_else(|| x.to_string());
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for &(a, b) in lattice.covers() {
        let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
    }
    out.push_str("}\n");
    out
}

/// Machine-readable result of one check or suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub lattice_key: Option<String>,
    pub verdict: bool,
    pub witnesses: Vec<Value>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(suite: &str, lattice_key: Option<String>, verdict: bool) -> Report {
        Report {
            suite: suite.to_string(),
            lattice_key,
            verdict,
            witnesses: Vec::new(),
            timings: BTreeMap::new(),
        }
    }
}

/// Checks a JSON value against the report envelope: exactly the keys
/// `suite` (string), `lattice_key` (string or null), `verdict` (bool),
/// `witnesses` (array) and `timings` (object of numbers).
pub fn validate_report(value: &Value) -> std::result::Result<(), String> {
    let obj = value.as_object().ok_or("report is not an object")?;
    let expected = ["lattice_key", "suite", "timings", "verdict", "witnesses"];
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    if keys != expected {
        return Err(format!("report keys {keys:?}, expected {expected:?}"));
    }
    if !obj["suite"].is_string() {
        return Err("suite must be a string".into());
    }
    if !(obj["lattice_key"].is_string() || obj["lattice_key"].is_null()) {
        return Err("lattice_key must be a string or null".into());
    }
    if !obj["verdict"].is_boolean() {
        return Err("verdict must be a boolean".into());
    }
    if !obj["witnesses"].is_array() {
        return Err("witnesses must be an array".into());
    }
    match obj["timings"].as_object() {
        Some(t) if t.values().all(Value::is_number) => Ok(()),
        _ => Err("timings must be an object of numbers".into()),
    }
}
