use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use locrep::cache::Provenance;

use crate::config::JobConfig;

pub const REPORT_SCHEMA: &str = "report/v1";
pub const SCHEMA_JSON: &str = include_str!("../schema/report-v1.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Which statement the check exercises.
    pub anchor: String,
    pub predicted: Value,
    pub computed: Value,
    pub pass: bool,
    /// Informational checks never affect the exit code.
    pub informational: bool,
}

impl Check {
    /// A check that passes iff `predicted == computed`.
    pub fn eq(name: impl Into<String>, anchor: &str, predicted: impl Serialize, computed: impl Serialize) -> Self {
        let predicted = serde_json::to_value(predicted).expect("serializable");
        let computed = serde_json::to_value(computed).expect("serializable");
        Check { name: name.into(), anchor: anchor.into(), pass: predicted == computed, predicted, computed, informational: false }
    }

    pub fn holds(name: impl Into<String>, anchor: &str, predicted: impl Serialize, computed: impl Serialize, pass: bool) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            predicted: serde_json::to_value(predicted).expect("serializable"),
            computed: serde_json::to_value(computed).expect("serializable"),
            pass,
            informational: false,
        }
    }

    pub fn info(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: String,
    pub tool: Tool,
    pub config: JobConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub pass: bool,
    /// Free-form facts about the run (class counts, degree multisets, ...).
    pub details: BTreeMap<String, Value>,
    /// Wall-clock seconds per phase; only present with `--timings`.
    pub timings: Option<BTreeMap<String, f64>>,
    pub cache: Vec<Provenance>,
}

impl ReportEnvelope {
    pub fn new(config: JobConfig) -> Self {
        ReportEnvelope {
            schema: REPORT_SCHEMA.into(),
            tool: Tool { name: "locrep".into(), version: env!("CARGO_PKG_VERSION").into() },
            config,
            checks: Vec::new(),
            summary: Summary { total: 0, passed: 0, failed: 0, informational: 0 },
            pass: true,
            details: BTreeMap::new(),
            timings: None,
            cache: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.finish();
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    fn finish(&mut self) {
        let asserted: Vec<&Check> = self.checks.iter().filter(|c| !c.informational).collect();
        self.summary = Summary {
            total: self.checks.len(),
            passed: asserted.iter().filter(|c| c.pass).count(),
            failed: asserted.iter().filter(|c| !c.pass).count(),
            informational: self.checks.len() - asserted.len(),
        };
        self.pass = self.summary.failed == 0;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "locrep {} {} {} {}", self.tool.version, c.subcommand.name(), c.group, c.ring);
        for (k, v) in &self.details {
            let _ = writeln!(out, "  {k}: {}", compact(v));
        }
        for ch in &self.checks {
            let tag = match (ch.informational, ch.pass) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "{tag} {:<32} predicted={} computed={}  [{}]",
                ch.name,
                compact(&ch.predicted),
                compact(&ch.computed),
                ch.anchor
            );
        }
        for p in &self.cache {
            let _ = writeln!(out, "cache {} {}", p.key, serde_json::to_value(&p.status).expect("serializable").as_str().unwrap_or(""));
        }
        if let Some(t) = &self.timings {
            for (k, v) in t {
                let _ = writeln!(out, "time {k} {v:.3}s");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{}: {} passed, {} failed, {} informational",
            if self.pass { "PASS" } else { "FAIL" },
            s.passed,
            s.failed,
            s.informational
        );
        out
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Checks the parts of a report that the published schema constrains:
/// required keys at every object level and the declared primitive types.
pub fn validate_against_schema(report: &Value) -> Result<(), String> {
    let schema: Value = serde_json::from_str(SCHEMA_JSON).map_err(|e| e.to_string())?;
    validate(&schema, report, &schema, "$")
}

fn validate(node: &Value, v: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = node.get("$ref").and_then(Value::as_str) {
        let name = r.trim_start_matches("#/$defs/");
        return validate(&root["$defs"][name], v, root, path);
    }
    if let Some(c) = node.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}"));
        }
    }
    if let Some(ty) = node.get("type") {
        let types: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "boolean" => v.is_boolean(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            "null" => v.is_null(),
            _ => true,
        });
        if !ok {
            return Err(format!("{path}: expected type {ty}"));
        }
    }
    if let (Some(req), Some(obj)) = (node.get("required").and_then(Value::as_array), v.as_object()) {
        for k in req.iter().filter_map(Value::as_str) {
            if !obj.contains_key(k) {
                return Err(format!("{path}: missing {k}"));
            }
        }
    }
    if let (Some(props), Some(obj)) = (node.get("properties").and_then(Value::as_object), v.as_object()) {
        for (k, sub) in props {
            if let Some(x) = obj.get(k) {
                validate(sub, x, root, &format!("{path}.{k}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (node.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(items, x, root, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}
