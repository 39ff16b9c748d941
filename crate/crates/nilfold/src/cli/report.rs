//! Uniform report layout shared by every subcommand.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::Format;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub budgets: Map<String, Value>,
    pub verdicts: BTreeMap<String, bool>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Self::default() }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(v));
        self
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), to_value(v));
        self
    }

    pub fn budget(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.budgets.insert(key.to_string(), to_value(v));
        self
    }

    pub fn verdict(&mut self, key: &str, ok: bool) -> &mut Self {
        self.verdicts.insert(key.to_string(), ok);
        self
    }

    pub fn failed(&self) -> Vec<String> {
        self.verdicts.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.clone()).collect()
    }
}

/// Non-finite floats become `null`.
fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// (section, dotted key, scalar) for every leaf value.
fn leaves(r: &Report) -> Vec<(&'static str, String, String)> {
    fn walk(prefix: String, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::Object(map) => {
                for (k, x) in map {
                    walk(format!("{prefix}.{k}"), x, out);
                }
            }
            Value::String(s) => out.push((prefix, s.clone())),
            other => out.push((prefix, other.to_string())),
        }
    }
    let mut rows = Vec::new();
    for (name, map) in [("inputs", &r.inputs), ("results", &r.results), ("budgets", &r.budgets)] {
        let mut flat = Vec::new();
        for (k, v) in map {
            walk(k.clone(), v, &mut flat);
        }
        rows.extend(flat.into_iter().map(|(k, v)| (name, k, v)));
    }
    for (k, ok) in &r.verdicts {
        rows.push(("verdicts", k.clone(), if *ok { "PASS".into() } else { "FAIL".into() }));
    }
    rows
}

pub fn render(r: &Report, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, r)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["command", "section", "key", "value"])?;
            for (section, key, value) in leaves(r) {
                w.write_record([r.command.as_str(), section, &key, &value])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{}", r.command)?;
            let mut current = "";
            for (section, key, value) in leaves(r) {
                if section != current {
                    writeln!(out, "[{section}]")?;
                    current = section;
                }
                writeln!(out, "  {key} = {value}")?;
            }
        }
    }
    Ok(())
}
